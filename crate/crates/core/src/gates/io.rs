//! Plain-text gate files.
//!
//! Line 1 holds `q`; each of the next `q^2` lines holds one matrix row as
//! `q^2` entries `re,im` separated by single spaces. Blank trailing lines are
//! ignored. Floats are written in their shortest round-trip form, so a
//! save/load cycle is bit-exact.

use std::fmt::Write as _;
use std::path::Path;

use crate::{c64, CMat, Error, Result};

use super::Gate;

pub fn format_gate(g: &Gate) -> String {
    let n = g.q() * g.q();
    let mut out = format!("{}\n", g.q());
    for r in 0..n {
        for c in 0..n {
            if c > 0 {
                out.push(' ');
            }
            let z = g.matrix()[(r, c)];
            let _ = write!(out, "{:?},{:?}", z.re, z.im);
        }
        out.push('\n');
    }
    out
}

/// Parses the text format; `path` is only used in error messages.
pub fn parse_gate(text: &str, path: &Path) -> Result<Gate> {
    let err = |line: usize, message: String| Error::Parse { path: path.to_path_buf(), line, message };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, first) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let q: usize = first.trim().parse().map_err(|_| err(1, format!("expected integer q, found '{}'", first.trim())))?;
    if q < 1 {
        return Err(err(1, "q must be positive".into()));
    }
    let n = q * q;
    let mut m = CMat::zeros(n, n);
    for r in 0..n {
        let (ln, line) = lines.next().ok_or_else(|| err(r + 2, format!("expected {n} matrix rows, found {r}")))?;
        let tokens: Vec<&str> = line.split(' ').collect();
        if tokens.len() != n {
            return Err(err(ln, format!("expected {n} entries, found {}", tokens.len())));
        }
        for (c, tok) in tokens.iter().enumerate() {
            let (re, im) = tok.split_once(',').ok_or_else(|| err(ln, format!("entry {} '{tok}' is not 're,im'", c + 1)))?;
            let re: f64 = re.parse().map_err(|_| err(ln, format!("entry {}: bad real part '{re}'", c + 1)))?;
            let im: f64 = im.parse().map_err(|_| err(ln, format!("entry {}: bad imaginary part '{im}'", c + 1)))?;
            m[(r, c)] = c64::new(re, im);
        }
    }
    if let Some((ln, extra)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(err(ln, format!("unexpected trailing content '{}'", extra.trim())));
    }
    Gate::new(q, m)
}

pub fn read_gate(path: &Path) -> Result<Gate> {
    let text = std::fs::read_to_string(path)?;
    parse_gate(&text, path)
}

pub fn write_gate(path: &Path, g: &Gate) -> Result<()> {
    std::fs::write(path, format_gate(g))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::haar_gate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip_is_bit_exact() {
        let g = haar_gate(3, &mut ChaCha8Rng::seed_from_u64(4));
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.txt");
        write_gate(&p, &g).unwrap();
        assert_eq!(read_gate(&p).unwrap(), g);
    }

    #[test]
    fn reports_line_numbers() {
        let p = Path::new("x.gate");
        let bad_count = "2\n1,0 0,0 0,0 0,0\n0,0 1,0 0,0\n";
        match parse_gate(bad_count, p) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let bad_num = "2\n1,0 0,0 0,0 0,0\n0,0 1,0 0,0 0,0\n0,0 0,0 x,0 0,0\n0,0 0,0 0,0 1,0\n";
        match parse_gate(bad_num, p) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        match parse_gate("two\n", p) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
        let short = "2\n1,0 0,0 0,0 0,0\n";
        assert!(matches!(parse_gate(short, p), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn rejects_non_unitary_file() {
        let text = "1\n2,0\n";
        assert!(matches!(parse_gate(text, Path::new("y")), Err(Error::NotUnitary(_))));
    }
}
