//! TOML channel files.
//!
//! ```toml
//! name = "binary-xor"
//! x = 2
//! y = 2
//! s = 2
//! z = 2
//! # W(z|x,y,s) flattened in (x, y, s, z) row-major order
//! w = [1, 0, 0, 1, 0, 1, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1]
//! f1 = [0, 0]
//! f2 = [0, 0]
//! g = [0, 1]
//! gamma1 = 0
//! gamma2 = 0
//! lambda = 0.6
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::DiscreteAvmac;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    x: usize,
    y: usize,
    s: usize,
    z: usize,
    w: Vec<f64>,
    f1: Vec<f64>,
    f2: Vec<f64>,
    g: Vec<f64>,
    gamma1: f64,
    gamma2: f64,
    lambda: f64,
}

/// Parses and validates a channel document.
pub fn parse_channel_str(text: &str) -> Result<DiscreteAvmac> {
    let doc: ChannelDocument = toml::from_str(text).map_err(|e| Error::ChannelFile(e.to_string()))?;
    let expected = doc.x * doc.y * doc.s * doc.z;
    if doc.w.len() != expected {
        return Err(Error::DimensionMismatch(format!(
            "expected |X||Y||S||Z| entries = {} x {} x {} x {} = {expected} in `w`, found {}",
            doc.x,
            doc.y,
            doc.s,
            doc.z,
            doc.w.len()
        )));
    }
    for (key, len, want) in [("f1", doc.f1.len(), doc.x), ("f2", doc.f2.len(), doc.y), ("g", doc.g.len(), doc.s)] {
        if len != want {
            return Err(Error::DimensionMismatch(format!("`{key}` has {len} entries, alphabet has {want}")));
        }
    }
    let ch = DiscreteAvmac {
        card_x: doc.x,
        card_y: doc.y,
        card_s: doc.s,
        card_z: doc.z,
        w: doc.w,
        f1: doc.f1,
        f2: doc.f2,
        g: doc.g,
        gamma1: doc.gamma1,
        gamma2: doc.gamma2,
        lambda: doc.lambda,
        name: doc.name,
    };
    ch.validate()?;
    Ok(ch)
}

pub fn parse_channel_file(path: impl AsRef<Path>) -> Result<DiscreteAvmac> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::ChannelFile(format!("cannot read {}: {e}", path.display())))?;
    parse_channel_str(&text)
}

pub fn channel_to_string(ch: &DiscreteAvmac) -> String {
    let doc = ChannelDocument {
        name: ch.name.clone(),
        x: ch.card_x,
        y: ch.card_y,
        s: ch.card_s,
        z: ch.card_z,
        w: ch.w.clone(),
        f1: ch.f1.clone(),
        f2: ch.f2.clone(),
        g: ch.g.clone(),
        gamma1: ch.gamma1,
        gamma2: ch.gamma2,
        lambda: ch.lambda,
    };
    toml::to_string(&doc).expect("channel documents always serialize")
}

pub fn write_channel_file(ch: &DiscreteAvmac, path: impl AsRef<Path>) -> std::io::Result<()> {
    std::fs::write(path, channel_to_string(ch))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::library;
    use proptest::prelude::*;

    const XOR: &str = r#"
name = "xor"
x = 2
y = 2
s = 2
z = 2
w = [1, 0, 0, 1, 0, 1, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1]
f1 = [0, 0]
f2 = [0, 0]
g = [0, 1]
gamma1 = 0
gamma2 = 0
lambda = 0.6
"#;

    #[test]
    fn minimal_xor_document() {
        let ch = parse_channel_str(XOR).unwrap();
        let mut expected = library::binary_xor(0.6);
        expected.name = Some("xor".into());
        assert_eq!(ch, expected);
    }

    #[test]
    fn wrong_transition_length() {
        let text = XOR.replace("w = [1, 0, 0, 1, ", "w = [");
        let err = parse_channel_str(&text).unwrap_err().to_string();
        assert!(err.contains("dimension mismatch: expected |X||Y||S||Z| entries"), "{err}");
    }

    #[test]
    fn missing_keys_and_bad_rows_are_reported() {
        let err = parse_channel_str(&XOR.replace("lambda = 0.6", "")).unwrap_err().to_string();
        assert!(err.contains("lambda"), "{err}");
        let err = parse_channel_str(&XOR.replace("w = [1, 0,", "w = [1, 1,")).unwrap_err();
        assert!(matches!(err, Error::NonStochasticRow { .. }));
        assert!(parse_channel_str(&XOR.replace("g = [0, 1]", "g = [0, 1, 2]")).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn write_then_parse_round_trips(
            rows in proptest::collection::vec(0.0f64..1.0, 8),
            g in proptest::collection::vec(0.0f64..3.0, 2),
            lambda in 0.0f64..2.0,
            named in any::<bool>(),
        ) {
            let mut ch = DiscreteAvmac::from_fn(
                2, 2, 2, 2,
                |x, y, s, z| { let p = rows[x * 4 + y * 2 + s]; if z == 0 { p } else { 1.0 - p } },
                vec![0.0, 1.0], vec![0.5, 0.25], g.clone(), (0.5, 0.5, lambda),
            ).unwrap();
            if named {
                ch.name = Some("random".into());
            }
            prop_assert_eq!(parse_channel_str(&channel_to_string(&ch)).unwrap(), ch);
        }
    }
}
