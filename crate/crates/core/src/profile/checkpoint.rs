//! Binary checkpoint files.
//!
//! Layout, little-endian: magic `SEPSCOPE1`, format version (u16), axis,
//! field and sampler tags (u8 each), seed, sample count and grid size (u64
//! each), an 8-byte configuration hash, the next sample index (u64), the
//! running sums as f64 (`S1` and `S2` per grid point, then `W`, `W2`, `WP`,
//! `WWP`, `WWPP`) and a CRC-32 of everything before it.

use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::{Axis, Sums};
use crate::sampling::{SamplerConfig, SamplerKind};
use crate::{Error, Field, Result};

const MAGIC: &[u8; 9] = b"SEPSCOPE1";
const VERSION: u16 = 1;
const HEADER_LEN: usize = 9 + 2 + 3 + 8 * 3 + 8 + 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub axis: Axis,
    pub field: Field,
    pub kind: SamplerKind,
    pub seed: u64,
    pub n_samples: u64,
    pub grid_points: u64,
    pub config_hash: [u8; 8],
    pub next_index: u64,
    pub sums: Sums,
}

pub(crate) fn config_hash(axis: Axis, cfg: &SamplerConfig, grid_points: usize, indicator: &str) -> [u8; 8] {
    let mut h = Sha256::new();
    h.update([VERSION as u8, axis.tag(), cfg.field.tag(), cfg.kind.tag()]);
    h.update(cfg.seed.to_le_bytes());
    h.update(cfg.n_samples.to_le_bytes());
    h.update((grid_points as u64).to_le_bytes());
    h.update(indicator.as_bytes());
    let digest = h.finalize();
    let mut out = [0u8; 8];
    out.copy_from_slice(&digest[..8]);
    out
}

impl Checkpoint {
    pub fn to_bytes(&self) -> Vec<u8> {
        let k = self.sums.s1.len();
        let mut b = Vec::with_capacity(HEADER_LEN + 8 * (2 * k + 5) + 4);
        b.extend_from_slice(MAGIC);
        b.extend_from_slice(&VERSION.to_le_bytes());
        b.extend_from_slice(&[self.axis.tag(), self.field.tag(), self.kind.tag()]);
        for v in [self.seed, self.n_samples, self.grid_points] {
            b.extend_from_slice(&v.to_le_bytes());
        }
        b.extend_from_slice(&self.config_hash);
        b.extend_from_slice(&self.next_index.to_le_bytes());
        let s = &self.sums;
        for v in s.s1.iter().chain(&s.s2).chain([&s.w, &s.w2, &s.wp, &s.wwp, &s.wwpp]) {
            b.extend_from_slice(&v.to_le_bytes());
        }
        let crc = crc32fast::hash(&b);
        b.extend_from_slice(&crc.to_le_bytes());
        b
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
            return Err(Error::Checkpoint("not a checkpoint file (bad magic)".into()));
        }
        if bytes.len() < HEADER_LEN + 4 {
            return Err(Error::Checkpoint("checksum error: file truncated".into()));
        }
        let (body, tail) = bytes.split_at(bytes.len() - 4);
        let stored = u32::from_le_bytes(tail.try_into().unwrap());
        if crc32fast::hash(body) != stored {
            return Err(Error::Checkpoint("checksum error: file truncated or corrupt".into()));
        }
        let mut r = Reader { b: body, pos: MAGIC.len() };
        let version = u16::from_le_bytes(r.take::<2>());
        if version != VERSION {
            return Err(Error::Checkpoint(format!("unsupported checkpoint version {version}, expected {VERSION}")));
        }
        let [axis, field, kind] = r.take::<3>();
        let axis = Axis::from_tag(axis).ok_or_else(|| Error::Checkpoint(format!("bad axis tag {axis}")))?;
        let field = Field::from_tag(field).ok_or_else(|| Error::Checkpoint(format!("bad field tag {field}")))?;
        let kind = SamplerKind::from_tag(kind).ok_or_else(|| Error::Checkpoint(format!("bad sampler tag {kind}")))?;
        let seed = r.u64();
        let n_samples = r.u64();
        let grid_points = r.u64();
        let config_hash = r.take::<8>();
        let next_index = r.u64();
        let k = usize::try_from(grid_points).map_err(|_| Error::Checkpoint("grid size overflow".into()))?;
        if body.len() != HEADER_LEN + 8 * (2 * k + 5) {
            return Err(Error::Checkpoint("payload length does not match grid size".into()));
        }
        let s1 = (0..k).map(|_| r.f64()).collect();
        let s2 = (0..k).map(|_| r.f64()).collect();
        let sums = Sums { s1, s2, w: r.f64(), w2: r.f64(), wp: r.f64(), wwp: r.f64(), wwpp: r.f64() };
        Ok(Self { axis, field, kind, seed, n_samples, grid_points, config_hash, next_index, sums })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        // Write then rename so an interrupted save never clobbers a good file.
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, self.to_bytes())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?)
    }

    /// Sampler configuration recorded in the file, with one worker.
    pub fn sampler_config(&self) -> SamplerConfig {
        SamplerConfig::new(self.field, self.kind, self.seed, self.n_samples)
    }
}

struct Reader<'a> {
    b: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take<const N: usize>(&mut self) -> [u8; N] {
        let out = self.b[self.pos..self.pos + N].try_into().unwrap();
        self.pos += N;
        out
    }

    fn u64(&mut self) -> u64 {
        u64::from_le_bytes(self.take::<8>())
    }

    fn f64(&mut self) -> f64 {
        f64::from_le_bytes(self.take::<8>())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Ppt, ProfileRun};
    use super::*;

    fn sample_checkpoint() -> Checkpoint {
        let cfg = SamplerConfig::new(Field::Rebit, SamplerKind::QuasiMonteCarlo, 5, 4096);
        let mut run = ProfileRun::new(Axis::Radial, cfg, 9, &Ppt).unwrap();
        run.advance(2048).unwrap();
        run.checkpoint()
    }

    #[test]
    fn bytes_round_trip() {
        let ck = sample_checkpoint();
        assert_eq!(Checkpoint::from_bytes(&ck.to_bytes()).unwrap(), ck);
    }

    #[test]
    fn every_truncation_is_rejected() {
        let bytes = sample_checkpoint().to_bytes();
        for len in 0..bytes.len() {
            assert!(Checkpoint::from_bytes(&bytes[..len]).is_err(), "length {len} accepted");
        }
    }

    #[test]
    fn every_single_bit_flip_is_rejected() {
        let bytes = sample_checkpoint().to_bytes();
        for i in 0..bytes.len() {
            let mut b = bytes.clone();
            b[i] ^= 0x10;
            assert!(Checkpoint::from_bytes(&b).is_err(), "flip at byte {i} accepted");
        }
    }

    #[test]
    fn hash_ignores_workers_only() {
        let cfg = SamplerConfig::new(Field::Qubit, SamplerKind::MonteCarlo, 1, 10);
        let h = config_hash(Axis::Azimuthal, &cfg, 11, "ppt");
        assert_eq!(h, config_hash(Axis::Azimuthal, &cfg.with_workers(8), 11, "ppt"));
        assert_ne!(h, config_hash(Axis::Azimuthal, &SamplerConfig { seed: 2, ..cfg }, 11, "ppt"));
        assert_ne!(h, config_hash(Axis::Radial, &cfg, 11, "ppt"));
        assert_ne!(h, config_hash(Axis::Azimuthal, &cfg, 11, "all"));
    }
}
