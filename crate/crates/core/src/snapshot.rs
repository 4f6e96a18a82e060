//! Binary snapshot of a built landscape.
//!
//! All integers are little-endian. The layout is:
//!
//! ```text
//! magic        8 bytes   "FITLAND\0"
//! version      u32       1
//! n_loci       u32
//! per locus:   u32 allele count m, then m times (u32 byte length, UTF-8 bytes)
//! node_count   u64
//! per node:    u64 code, f64 fitness, u8 variance flag (0/1), f64 variance
//!              (zero bits when the flag is 0)
//! edge_count   u64
//! offsets      (node_count + 1) x u64, CSR row starts of the out-edges
//! targets      edge_count x u64, target node indices
//! ```
//!
//! Nodes appear in ascending code order. Loading validates the header, the
//! alphabet table, the code order, the CSR structure, and that every stored
//! edge joins single-mutation neighbors in the direction of strictly
//! increasing fitness.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::genotype::{GenotypeCode, SequenceSpace};
use crate::landscape::{Landscape, Node};

pub const MAGIC: [u8; 8] = *b"FITLAND\0";
pub const VERSION: u32 = 1;

const MAX_SYMBOL_BYTES: u32 = 1 << 16;

pub fn write_snapshot<W: Write>(landscape: &Landscape, writer: W) -> Result<()> {
    let mut w = BufWriter::new(writer);
    let space = landscape.space();
    w.write_all(&MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(space.n_loci() as u32).to_le_bytes())?;
    for symbols in space.alphabets() {
        w.write_all(&(symbols.len() as u32).to_le_bytes())?;
        for s in symbols {
            w.write_all(&(s.len() as u32).to_le_bytes())?;
            w.write_all(s.as_bytes())?;
        }
    }
    w.write_all(&(landscape.node_count() as u64).to_le_bytes())?;
    for i in 0..landscape.node_count() {
        w.write_all(&landscape.code(i).0.to_le_bytes())?;
        w.write_all(&landscape.fitness()[i].to_bits().to_le_bytes())?;
        match landscape.variances()[i] {
            Some(v) => {
                w.write_all(&[1])?;
                w.write_all(&v.to_bits().to_le_bytes())?;
            }
            None => {
                w.write_all(&[0])?;
                w.write_all(&0u64.to_le_bytes())?;
            }
        }
    }
    let (offsets, targets) = landscape.out_csr();
    w.write_all(&(targets.len() as u64).to_le_bytes())?;
    for &o in offsets {
        w.write_all(&(o as u64).to_le_bytes())?;
    }
    for &t in targets {
        w.write_all(&(t as u64).to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_snapshot(landscape: &Landscape, path: impl AsRef<Path>) -> Result<()> {
    write_snapshot(landscape, File::create(path)?)
}

struct Input<R> {
    inner: R,
}

impl<R: Read> Input<R> {
    fn bytes<const N: usize>(&mut self) -> Result<[u8; N]> {
        let mut buf = [0u8; N];
        self.inner.read_exact(&mut buf).map_err(|e| match e.kind() {
            std::io::ErrorKind::UnexpectedEof => Error::Snapshot("truncated file".into()),
            _ => Error::Io(e),
        })?;
        Ok(buf)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.bytes::<1>()?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.bytes()?))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.bytes()?))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_bits(self.u64()?))
    }

    fn string(&mut self) -> Result<String> {
        let len = self.u32()?;
        if len > MAX_SYMBOL_BYTES {
            return Err(Error::Snapshot("allele symbol too long".into()));
        }
        let mut buf = vec![0u8; len as usize];
        self.inner
            .read_exact(&mut buf)
            .map_err(|_| Error::Snapshot("truncated file".into()))?;
        String::from_utf8(buf).map_err(|_| Error::Snapshot("allele symbol is not UTF-8".into()))
    }
}

fn bad(msg: &str) -> Error {
    Error::Snapshot(msg.into())
}

pub fn read_snapshot<R: Read>(reader: R) -> Result<Landscape> {
    let mut r = Input {
        inner: BufReader::new(reader),
    };
    if r.bytes::<8>()? != MAGIC {
        return Err(bad("not a landscape snapshot"));
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(Error::Snapshot(format!("unsupported version {version}")));
    }
    let n_loci = r.u32()? as usize;
    if n_loci == 0 || n_loci > 64 {
        return Err(bad("invalid locus count"));
    }
    let mut alphabets = Vec::with_capacity(n_loci);
    for _ in 0..n_loci {
        let m = r.u32()?;
        if m > MAX_SYMBOL_BYTES {
            return Err(bad("invalid alphabet size"));
        }
        alphabets.push((0..m).map(|_| r.string()).collect::<Result<Vec<_>>>()?);
    }
    let space = SequenceSpace::new(alphabets)?;

    let node_count = r.u64()?;
    if node_count == 0 || node_count > space.total_size() || node_count >= u32::MAX as u64 {
        return Err(bad("invalid node count"));
    }
    let node_count = node_count as usize;
    let mut nodes = Vec::with_capacity(node_count);
    for _ in 0..node_count {
        let code = GenotypeCode(r.u64()?);
        let fitness = r.f64()?;
        let flag = r.u8()?;
        let v = r.f64()?;
        let variance = match flag {
            0 => None,
            1 => Some(v),
            _ => return Err(bad("invalid variance flag")),
        };
        if code.0 >= space.total_size() {
            return Err(bad("genotype code out of range"));
        }
        if nodes.last().is_some_and(|p: &Node| p.code >= code) {
            return Err(bad("genotype codes not strictly increasing"));
        }
        if !fitness.is_finite() {
            return Err(bad("non-finite fitness"));
        }
        nodes.push(Node {
            code,
            fitness,
            variance,
        });
    }

    let edge_count = r.u64()?;
    let max_edges = node_count as u64 * space.neighbor_count() as u64;
    if edge_count > max_edges {
        return Err(bad("invalid edge count"));
    }
    let mut offsets = Vec::with_capacity(node_count + 1);
    for _ in 0..=node_count {
        offsets.push(r.u64()? as usize);
    }
    if offsets[0] != 0
        || offsets[node_count] as u64 != edge_count
        || offsets.windows(2).any(|w| w[0] > w[1])
    {
        return Err(bad("malformed edge offsets"));
    }
    let mut targets = Vec::with_capacity(edge_count as usize);
    for _ in 0..edge_count {
        let t = r.u64()?;
        if t >= node_count as u64 {
            return Err(bad("edge target out of range"));
        }
        targets.push(t as u32);
    }
    for u in 0..node_count {
        for &v in &targets[offsets[u]..offsets[u + 1]] {
            let (a, b) = (&nodes[u], &nodes[v as usize]);
            if space.hamming_unchecked(a.code, b.code) != 1 || b.fitness <= a.fitness {
                return Err(bad("edge does not join a fitter single mutant"));
            }
        }
    }
    let mut rest = [0u8; 1];
    if r.inner.read(&mut rest)? != 0 {
        return Err(bad("trailing bytes"));
    }
    Ok(Landscape::from_parts(space, nodes, offsets, targets))
}

pub fn load_snapshot(path: impl AsRef<Path>) -> Result<Landscape> {
    read_snapshot(File::open(path)?)
}
