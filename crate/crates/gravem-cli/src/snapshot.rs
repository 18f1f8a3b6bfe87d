//! Binary state snapshots.
//!
//! A plain-text header followed by every field as little-endian `f64`, in header order:
//!
//! ```text
//! gravem-snapshot 1
//! n 16
//! L 4
//! t 0.5
//! fields B_x B_y B_z D_x D_y D_z
//! ```
//!
//! Numbers are written with Rust's shortest round-trip formatting, so a read after a write
//! reproduces every bit.

use std::io::{self, BufRead, Write};

use gravem::evolution::GridState;

pub const MAGIC: &str = "gravem-snapshot 1";

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub n: usize,
    pub l: f64,
    pub t: f64,
    pub names: Vec<String>,
    pub fields: Vec<Vec<f64>>,
}

impl Snapshot {
    pub fn of(state: &GridState) -> Snapshot {
        Snapshot {
            n: state.grid.n,
            l: state.grid.l,
            t: state.t,
            names: state.field_names(),
            fields: state.fields().iter().map(|f| f.to_vec()).collect(),
        }
    }

    pub fn write(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "{MAGIC}\nn {}\nL {:?}\nt {:?}\nfields {}", self.n, self.l, self.t, self.names.join(" "))?;
        for f in &self.fields {
            let bytes: Vec<u8> = f.iter().flat_map(|v| v.to_le_bytes()).collect();
            out.write_all(&bytes)?;
        }
        Ok(())
    }

    pub fn read(input: &mut impl BufRead) -> io::Result<Snapshot> {
        let bad = |what: &str| io::Error::new(io::ErrorKind::InvalidData, format!("snapshot header: {what}"));
        let mut line = String::new();
        let mut next = |key: &str| -> io::Result<String> {
            line.clear();
            input.read_line(&mut line)?;
            let text = line.trim_end_matches('\n');
            if key.is_empty() {
                return Ok(text.to_string());
            }
            text.strip_prefix(key)
                .and_then(|rest| rest.strip_prefix(' '))
                .map(str::to_string)
                .ok_or_else(|| bad(&format!("expected `{key}`")))
        };
        if next("")? != MAGIC {
            return Err(bad("bad magic line"));
        }
        let n: usize = next("n")?.parse().map_err(|_| bad("n"))?;
        let l: f64 = next("L")?.parse().map_err(|_| bad("L"))?;
        let t: f64 = next("t")?.parse().map_err(|_| bad("t"))?;
        let names: Vec<String> = next("fields")?.split(' ').map(str::to_string).collect();
        let len = n.checked_pow(3).ok_or_else(|| bad("n"))?;
        let mut buf = vec![0u8; 8 * len];
        let mut fields = Vec::with_capacity(names.len());
        for _ in &names {
            input.read_exact(&mut buf)?;
            fields.push(buf.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect());
        }
        Ok(Snapshot { n, l, t, names, fields })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gravem::grid::Grid;

    #[test]
    fn round_trip_is_bit_exact() {
        let grid = Grid::new(16, 0.1 + 0.2).unwrap();
        let f = |s: f64| grid.sample(move |x| (s * x[0]).sin() * 1e-300 + x[1] / 3.0);
        let mut state = GridState::flat_em(grid, [f(1.0), f(2.0), f(3.0)], [f(4.0), f(5.0), f(6.0)]);
        state.t = 1.0 / 7.0;
        state.b[0][5] = -0.0;
        let snap = Snapshot::of(&state);
        let mut bytes = Vec::new();
        snap.write(&mut bytes).unwrap();
        let back = Snapshot::read(&mut bytes.as_slice()).unwrap();
        assert_eq!(back.t.to_bits(), snap.t.to_bits());
        assert_eq!(back.l.to_bits(), snap.l.to_bits());
        assert_eq!(back.names, snap.names);
        for (a, b) in back.fields.iter().zip(&snap.fields) {
            assert!(a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits()));
        }
    }

    #[test]
    fn bad_magic_is_rejected() {
        let mut text: &[u8] = b"not a snapshot\n";
        assert!(Snapshot::read(&mut text).is_err());
    }

    #[test]
    fn truncated_payload_is_rejected() {
        let grid = Grid::new(16, 1.0).unwrap();
        let z = || std::array::from_fn(|_| grid.zeros());
        let mut bytes = Vec::new();
        Snapshot::of(&GridState::flat_em(grid, z(), z())).write(&mut bytes).unwrap();
        bytes.truncate(bytes.len() - 1);
        assert!(Snapshot::read(&mut bytes.as_slice()).is_err());
    }
}
