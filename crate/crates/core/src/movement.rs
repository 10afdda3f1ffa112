//! Closed-form movement-time model for straight and rectilinear pointing.
//!
//! Times follow the first-order-lag form of Fitts' law,
//! `t = (ln 2 / k) * log2(2A / W)`, so every time is in units of `1/k` and
//! results are only comparable at a fixed gain `k`. `a1`/`a2` are the X and
//! Y legs of a rectilinear path and `A = sqrt(a1² + a2²)` the straight one.
//!
//! Nothing here clamps: a leg shorter than `W/2` yields a negative time,
//! which is what the formulas say. Zero or negative lengths are rejected.

use std::f64::consts::{FRAC_PI_2, LN_2};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{name} must be {rule}, got {value}")]
pub struct DomainError {
    pub name: &'static str,
    pub rule: &'static str,
    pub value: f64,
}

fn positive(name: &'static str, value: f64) -> Result<f64, DomainError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(DomainError {
            name,
            rule: "positive and finite",
            value,
        })
    }
}

/// Index of difficulty, `log2(2a / w)` bits.
pub fn fitts_id(a: f64, w: f64) -> Result<f64, DomainError> {
    let a = positive("a", a)?;
    let w = positive("w", w)?;
    Ok((2.0 * a / w).log2())
}

/// Straight-line movement time, `(ln 2 / k) * ID`.
pub fn mt_lag(a: f64, w: f64, k: f64) -> Result<f64, DomainError> {
    let k = positive("k", k)?;
    Ok(LN_2 / k * fitts_id(a, w)?)
}

/// Rectilinear time: one leg along X, then one along Y.
pub fn t_rect(a1: f64, a2: f64, w: f64, k: f64) -> Result<f64, DomainError> {
    let (a1, a2) = (positive("a1", a1)?, positive("a2", a2)?);
    let (w, k) = (positive("w", w)?, positive("k", k)?);
    Ok(LN_2 / k * (4.0 * a1 * a2 / (w * w)).log2())
}

/// Extra time of the rectilinear path over the straight one.
pub fn delta_t(a1: f64, a2: f64, w: f64, k: f64) -> Result<f64, DomainError> {
    let (a1, a2) = (positive("a1", a1)?, positive("a2", a2)?);
    let (w, k) = (positive("w", w)?, positive("k", k)?);
    let a = a1.hypot(a2);
    Ok(LN_2 / k * (2.0 * a1 * a2 / (a * w)).log2())
}

/// Rectilinear time with the cursor sped up by a factor `s`.
pub fn t_rect_speed(a1: f64, a2: f64, w: f64, k: f64, s: f64) -> Result<f64, DomainError> {
    let (a1, a2) = (positive("a1", a1)?, positive("a2", a2)?);
    let (w, k, s) = (positive("w", w)?, positive("k", k)?, positive("s", s)?);
    Ok(LN_2 / k * (4.0 * a1 * a2 / (w * w * s * s)).log2())
}

/// Speed-up that makes rectilinear travel as fast as the straight path,
/// `sqrt(2 a1 a2 / (A w))`. May be below 1.
pub fn speedup_fitts(a1: f64, a2: f64, w: f64) -> Result<f64, DomainError> {
    let (a1, a2, w) = (positive("a1", a1)?, positive("a2", a2)?, positive("w", w)?);
    let a = a1.hypot(a2);
    Ok((2.0 * a1 * a2 / (a * w)).sqrt())
}

/// Speed-up that compresses the Manhattan legs of a path at angle `theta`
/// down to its Euclidean length: `cos θ + sin θ`.
pub fn speedup_manhattan(theta: f64) -> Result<f64, DomainError> {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(DomainError {
            name: "theta",
            rule: "within [0, π/2]",
            value: theta,
        });
    }
    Ok(theta.cos() + theta.sin())
}

/// Index of difficulty over the Manhattan length `|d1| + |d2|`.
pub fn manhattan_id(d1: f64, d2: f64, w: f64) -> Result<f64, DomainError> {
    let len = positive("|d1| + |d2|", d1.abs() + d2.abs())?;
    fitts_id(len, w)
}

/// How much longer the rectilinear path is than the straight one,
/// `a1 + a2 - A`. Goes to zero as either leg does, unlike [`delta_t`],
/// which diverges there.
pub fn rectilinear_excess(a1: f64, a2: f64) -> f64 {
    let (a1, a2) = (a1.abs(), a2.abs());
    a1 + a2 - a1.hypot(a2)
}

/// One pointing movement described by its axis legs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoveSpec {
    pub a1: f64,
    pub a2: f64,
    pub w: f64,
    pub k: f64,
    /// Cursor speed factor used for [`MovementReport::t_rec_speed`].
    pub s: f64,
}

impl MoveSpec {
    pub fn new(a1: f64, a2: f64, w: f64, k: f64) -> Self {
        MoveSpec { a1, a2, w, k, s: 1.0 }
    }

    pub fn from_points(from: (f64, f64), to: (f64, f64), w: f64, k: f64) -> Self {
        Self::new((to.0 - from.0).abs(), (to.1 - from.1).abs(), w, k)
    }

    /// Straight-line distance `A`.
    pub fn a(&self) -> f64 {
        self.a1.hypot(self.a2)
    }

    /// Direction of the straight path from the X axis.
    pub fn theta(&self) -> f64 {
        self.a2.atan2(self.a1)
    }

    pub fn report(&self) -> Result<MovementReport, DomainError> {
        let (a1, a2, w, k) = (self.a1, self.a2, self.w, self.k);
        let a = self.a();
        Ok(MovementReport {
            a,
            theta: self.theta(),
            id: fitts_id(a, w)?,
            id_manhattan: manhattan_id(a1, a2, w)?,
            t1: mt_lag(a1, w, k)?,
            t2: mt_lag(a2, w, k)?,
            t_rec: t_rect(a1, a2, w, k)?,
            t_shortest: mt_lag(a, w, k)?,
            delta_t: delta_t(a1, a2, w, k)?,
            s_fitts: speedup_fitts(a1, a2, w)?,
            s_manhattan: speedup_manhattan(self.theta())?,
            t_rec_speed: t_rect_speed(a1, a2, w, k, self.s)?,
            excess_px: rectilinear_excess(a1, a2),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MovementReport {
    pub a: f64,
    pub theta: f64,
    pub id: f64,
    pub id_manhattan: f64,
    pub t1: f64,
    pub t2: f64,
    pub t_rec: f64,
    pub t_shortest: f64,
    pub delta_t: f64,
    pub s_fitts: f64,
    pub s_manhattan: f64,
    pub t_rec_speed: f64,
    pub excess_px: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, SQRT_2};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    // Reference values below were evaluated independently at 30 digits.

    #[test]
    fn index_of_difficulty() {
        assert_eq!(fitts_id(0.5, 1.0).unwrap(), 0.0);
        assert_eq!(fitts_id(2.0, 1.0).unwrap(), 2.0);
        assert!(close(fitts_id(100.0, 36.0).unwrap(), 2.473_931_188_332_412, 1e-12));
        assert!(fitts_id(0.0, 1.0).is_err());
        assert!(fitts_id(1.0, -1.0).is_err());
        assert!(fitts_id(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn lag_time() {
        assert!(close(mt_lag(64.0, 2.0, LN_2).unwrap(), 6.0, 1e-12));
        assert!(close(mt_lag(100.0, 36.0, LN_2).unwrap(), fitts_id(100.0, 36.0).unwrap(), 1e-12));
        assert!(close(
            mt_lag(100.0 * SQRT_2, 36.0, 1.0).unwrap(),
            2.061_372_018_371_899,
            1e-12
        ));
        assert!(mt_lag(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn rectilinear() {
        assert_eq!(t_rect(0.5, 0.5, 1.0, 1.0).unwrap(), 0.0);
        assert!(close(t_rect(3.0, 4.0, 1.0, LN_2).unwrap(), 5.584_962_500_721_156, 1e-12));
        assert!(t_rect(0.0, 4.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn delta() {
        let d = delta_t(3.0, 4.0, 1.0, LN_2).unwrap();
        assert!(close(d, 2.263_034_405_833_794, 1e-12));
        let rec = t_rect(3.0, 4.0, 1.0, LN_2).unwrap();
        let short = mt_lag(5.0, 1.0, LN_2).unwrap();
        assert!(close(rec - short, d, 1e-12));
        // Equal legs: (ln2/k) log2(sqrt(2) a1 / w).
        let (a1, w, k) = (37.0, 3.0, 0.8);
        let want = LN_2 / k * (SQRT_2 * a1 / w).log2();
        assert!(close(delta_t(a1, a1, w, k).unwrap(), want, 1e-12));
    }

    #[test]
    fn sped_up_rectilinear() {
        assert_eq!(t_rect_speed(3.0, 4.0, 1.0, 2.0, 1.0).unwrap(), t_rect(3.0, 4.0, 1.0, 2.0).unwrap());
        assert!(close(t_rect_speed(8.0, 8.0, 1.0, LN_2, 2.0).unwrap(), 6.0, 1e-12));
        let s = speedup_fitts(3.0, 4.0, 1.0).unwrap();
        assert!(close(s, 2.190_890_230_020_664, 1e-12));
        assert!(close(
            t_rect_speed(3.0, 4.0, 1.0, LN_2, s).unwrap(),
            mt_lag(5.0, 1.0, LN_2).unwrap(),
            1e-12
        ));
    }

    #[test]
    fn fitts_speedup() {
        assert!(close(speedup_fitts(100.0, 100.0, 10.0).unwrap(), 3.760_603_093_086_394, 1e-12));
        let a = 50.0;
        let leg = a / SQRT_2;
        assert!(close(speedup_fitts(leg, leg, 2.0).unwrap(), (a / 2.0).sqrt(), 1e-12));
        assert!(speedup_fitts(0.01, 50.0, 40.0).unwrap() < 1.0);
    }

    #[test]
    fn manhattan_speedup() {
        assert_eq!(speedup_manhattan(0.0).unwrap(), 1.0);
        assert!(close(speedup_manhattan(FRAC_PI_4).unwrap(), SQRT_2, 1e-12));
        assert!(close(speedup_manhattan(FRAC_PI_3).unwrap(), 1.366_025_403_784_439, 1e-12));
        assert!(close(speedup_manhattan(FRAC_PI_2).unwrap(), 1.0, 1e-12));
        assert!(speedup_manhattan(-0.1).is_err());
        assert!(speedup_manhattan(2.0).is_err());
    }

    #[test]
    fn manhattan_index() {
        assert_eq!(manhattan_id(7.0, 0.0, 2.0).unwrap(), fitts_id(7.0, 2.0).unwrap());
        assert!(close(manhattan_id(3.0, 4.0, 1.0).unwrap(), 14f64.log2(), 1e-12));
        assert!(close(fitts_id(5.0, 1.0).unwrap(), 10f64.log2(), 1e-12));
        assert_eq!(manhattan_id(-3.0, 4.0, 1.0).unwrap(), manhattan_id(3.0, 4.0, 1.0).unwrap());
        assert!(manhattan_id(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn excess_vanishes_on_axis() {
        assert_eq!(rectilinear_excess(0.0, 10.0), 0.0);
        assert_eq!(rectilinear_excess(3.0, 4.0), 2.0);
    }

    #[test]
    fn report_bundle() {
        let r = MoveSpec::new(3.0, 4.0, 1.0, LN_2).report().unwrap();
        assert!(close(r.t_rec, 5.5850, 1e-4));
        assert!(close(r.t_shortest, 10f64.log2(), 1e-12));
        assert!(close(r.delta_t, 2.2630, 1e-4));
        assert!(close(r.s_fitts, 2.1909, 1e-4));
        assert!(close(r.t1 + r.t2, r.t_rec, 1e-12));
        let m = MoveSpec::from_points((10.0, 10.0), (13.0, 6.0), 1.0, 1.0);
        assert_eq!((m.a1, m.a2), (3.0, 4.0));
    }
}
