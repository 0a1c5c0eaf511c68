//! Reads a channel description, prints its shape and writes it back.

use avmac::channel::library;
use avmac::cli::{channel_to_string, parse_channel_file, parse_channel_str};

fn main() -> avmac::Result<()> {
    let ch = match std::env::args().nth(1) {
        Some(path) => parse_channel_file(path)?,
        None => library::shifted_adder(0.3),
    };
    println!(
        "|X| = {}, |Y| = {}, |S| = {}, |Z| = {}, state costs {:?}, budget {}",
        ch.card_x, ch.card_y, ch.card_s, ch.card_z, ch.g, ch.lambda
    );
    let text = channel_to_string(&ch);
    assert_eq!(parse_channel_str(&text)?, ch);
    print!("{text}");
    Ok(())
}
