//! CSV state dumps: `index,re,im` with the basis index in hex, sorted, entries above 1e-12.

use std::io::{Read, Write};

use super::{QuantumState, SparseState};
use crate::error::{Error, Result};
use crate::rotation::C64;

pub const DUMP_THRESHOLD: f64 = 1e-12;

pub fn write_csv<S: QuantumState + ?Sized, W: Write>(state: &S, out: W) -> Result<()> {
    let mut entries = Vec::new();
    state.for_each_amplitude(&mut |i, a| {
        if a.norm() > DUMP_THRESHOLD {
            entries.push((i, a));
        }
    });
    entries.sort_unstable_by_key(|e| e.0);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "re", "im"])?;
    for (i, a) in entries {
        w.write_record([
            format!("{i:#x}"),
            format!("{:.16e}", a.re),
            format!("{:.16e}", a.im),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(n_qubits: usize, input: R) -> Result<SparseState> {
    let mut r = csv::Reader::from_reader(input);
    let mut entries = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let bad = |message: String| Error::Parse {
            line: line + 2,
            message,
        };
        if rec.len() != 3 {
            return Err(bad(format!("expected 3 fields, got {}", rec.len())));
        }
        let idx = rec[0].trim();
        let idx = u64::from_str_radix(idx.trim_start_matches("0x"), 16)
            .map_err(|e| bad(format!("index `{idx}`: {e}")))?;
        if n_qubits < 64 && idx >> n_qubits != 0 {
            return Err(bad(format!("index {idx:#x} exceeds {n_qubits} qubits")));
        }
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| bad(format!("`{s}`: {e}")))
        };
        entries.push((idx, C64::new(num(&rec[1])?, num(&rec[2])?)));
    }
    Ok(SparseState::from_entries(
        n_qubits,
        entries,
        super::DEFAULT_PRUNE_TOLERANCE,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotation::Axis;
    use crate::state::PureState;

    #[test]
    fn round_trip() {
        let mut s = PureState::all_ground(3);
        s.apply_controlled_rotation(2, &[], 0.8, &Axis::Y).unwrap();
        let mut buf = Vec::new();
        write_csv(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("index,re,im\n0x0,"));
        assert!(text.contains("\n0x4,"));
        let back = read_csv(3, buf.as_slice()).unwrap();
        assert_eq!(back.to_dense(), s);
    }

    #[test]
    fn rejects_out_of_range_index() {
        assert!(read_csv(2, "index,re,im\n0x8,1,0\n".as_bytes()).is_err());
    }
}
