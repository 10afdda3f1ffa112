//! Session server. Each TCP connection gets its own device and is handled on
//! its own thread, one message at a time. A connection that opens with an
//! HTTP `GET` is upgraded to WebSocket (one JSON message per text frame);
//! anything else speaks line-delimited JSON.

use std::io::{self, BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};
use std::thread;

use anyhow::{Context, Result};
use tungstenite::Message;
use wheeler_core::device::DeviceConfig;
use wheeler_core::protocol::Session;

use crate::ServeArgs;

pub fn run(args: &ServeArgs, config: DeviceConfig) -> Result<()> {
    if args.stdio {
        let stdin = io::stdin();
        return serve_lines(stdin.lock(), io::stdout().lock(), config);
    }
    let listener = TcpListener::bind((args.host.as_str(), args.port))
        .with_context(|| format!("binding {}:{}", args.host, args.port))?;
    println!("listening on {}", listener.local_addr()?);
    io::stdout().flush()?;
    for stream in listener.incoming() {
        let stream = match stream {
            Ok(s) => s,
            Err(e) => {
                eprintln!("accept failed: {e}");
                continue;
            }
        };
        let config = config.clone();
        thread::spawn(move || {
            let peer = stream.peer_addr().map(|a| a.to_string()).unwrap_or_default();
            if let Err(e) = serve_connection(stream, config) {
                eprintln!("{peer}: {e:#}");
            }
        });
    }
    Ok(())
}

fn serve_connection(stream: TcpStream, config: DeviceConfig) -> Result<()> {
    let mut head = [0u8; 4];
    let n = stream.peek(&mut head)?;
    if n == 4 && &head == b"GET " {
        return serve_websocket(stream, config);
    }
    let reader = BufReader::new(stream.try_clone()?);
    serve_lines(reader, stream, config)
}

/// Reads requests line by line and answers each before reading the next.
pub fn serve_lines(reader: impl BufRead, mut writer: impl Write, config: DeviceConfig) -> Result<()> {
    let mut session = Session::new(config)?;
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        for reply in session.handle_line(&line) {
            writeln!(writer, "{}", reply.to_line())?;
        }
        writer.flush()?;
    }
    Ok(())
}

fn serve_websocket(stream: TcpStream, config: DeviceConfig) -> Result<()> {
    let mut ws = tungstenite::accept(stream).context("websocket handshake")?;
    let mut session = Session::new(config)?;
    loop {
        let text = match ws.read() {
            Ok(Message::Text(t)) => t,
            Ok(Message::Binary(b)) => String::from_utf8_lossy(&b).into_owned(),
            Ok(Message::Close(_)) | Err(tungstenite::Error::ConnectionClosed) => return Ok(()),
            Ok(_) => continue,
            Err(e) => return Err(e.into()),
        };
        for reply in session.handle_line(&text) {
            ws.send(Message::Text(reply.to_line()))?;
        }
    }
}
