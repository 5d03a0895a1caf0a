//! Binary model file: magic, version, shape header, little-endian f64
//! parameter blocks, metadata, and a trailing CRC-64 checksum.

use std::path::Path;

use crate::error::{Error, Result};
use crate::snn::{ModelMeta, SnnModel, StageTag, N_FEATURES, N_HIDDEN, N_OUTPUTS};

const MAGIC: &[u8; 4] = b"WSNN";
const VERSION: u32 = 1;

/// CRC-64/XZ (reflected, polynomial 0x42F0E1EBA9EA3693).
pub fn crc64(data: &[u8]) -> u64 {
    const POLY: u64 = 0xC96C5795D7870F42; // reflected 0x42F0E1EBA9EA3693
    const TABLE: [u64; 256] = {
        let mut table = [0u64; 256];
        let mut i = 0;
        while i < 256 {
            let mut crc = i as u64;
            let mut bit = 0;
            while bit < 8 {
                crc = if crc & 1 != 0 { (crc >> 1) ^ POLY } else { crc >> 1 };
                bit += 1;
            }
            table[i] = crc;
            i += 1;
        }
        table
    };
    let mut crc = !0u64;
    for &b in data {
        crc = TABLE[((crc ^ b as u64) & 0xFF) as usize] ^ (crc >> 8);
    }
    !crc
}

/// Serializes the model to its on-disk byte layout.
pub fn model_to_bytes(m: &SnnModel) -> Vec<u8> {
    let mut buf = Vec::with_capacity(1024);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(N_FEATURES as u32).to_le_bytes());
    buf.extend_from_slice(&(N_HIDDEN as u32).to_le_bytes());
    buf.extend_from_slice(&(N_OUTPUTS as u32).to_le_bytes());
    for row in &m.w0 {
        for v in row {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    for v in &m.b0 {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    for row in &m.w1 {
        for v in row {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    for v in &m.b1 {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    let tag = m.meta.stage.as_str().as_bytes();
    buf.extend_from_slice(&(tag.len() as u32).to_le_bytes());
    buf.extend_from_slice(tag);
    buf.extend_from_slice(&m.meta.seed.to_le_bytes());
    buf.extend_from_slice(&m.meta.loss_param.to_le_bytes());
    let crc = crc64(&buf);
    buf.extend_from_slice(&crc.to_le_bytes());
    buf
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.data.len() {
            return Err(Error::MalformedModel(format!(
                "need {n} bytes at offset {}, file has {}",
                self.pos,
                self.data.len()
            )));
        }
        let s = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// Parses a model from its on-disk byte layout, verifying the checksum.
pub fn model_from_bytes(data: &[u8]) -> Result<SnnModel> {
    if data.len() < 8 {
        return Err(Error::MalformedModel("file shorter than header".into()));
    }
    let (payload, crc_bytes) = data.split_at(data.len() - 8);
    let stored = u64::from_le_bytes(crc_bytes.try_into().unwrap());
    let computed = crc64(payload);
    if stored != computed {
        return Err(Error::ChecksumMismatch { stored, computed });
    }

    let mut r = Reader { data: payload, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(Error::BadMagic);
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let shape = (r.u32()?, r.u32()?, r.u32()?);
    if shape != (N_FEATURES as u32, N_HIDDEN as u32, N_OUTPUTS as u32) {
        return Err(Error::ShapeMismatch {
            expected: format!("({N_FEATURES}, {N_HIDDEN}, {N_OUTPUTS})"),
            found: format!("{shape:?}"),
        });
    }

    let mut w0 = [[0.0; N_FEATURES]; N_HIDDEN];
    for row in w0.iter_mut() {
        for v in row.iter_mut() {
            *v = r.f64()?;
        }
    }
    let mut b0 = [0.0; N_HIDDEN];
    for v in b0.iter_mut() {
        *v = r.f64()?;
    }
    let mut w1 = [[0.0; N_HIDDEN]; N_OUTPUTS];
    for row in w1.iter_mut() {
        for v in row.iter_mut() {
            *v = r.f64()?;
        }
    }
    let mut b1 = [0.0; N_OUTPUTS];
    for v in b1.iter_mut() {
        *v = r.f64()?;
    }

    let tag_len = r.u32()? as usize;
    if tag_len > 16 {
        return Err(Error::MalformedModel(format!("stage tag length {tag_len}")));
    }
    let tag = std::str::from_utf8(r.take(tag_len)?)
        .map_err(|_| Error::MalformedModel("stage tag is not utf-8".into()))?;
    let stage = StageTag::parse(tag)?;
    let seed = r.u64()?;
    let loss_param = r.f64()?;
    if r.pos != payload.len() {
        return Err(Error::MalformedModel(format!(
            "{} trailing bytes",
            payload.len() - r.pos
        )));
    }

    Ok(SnnModel {
        w0,
        b0,
        w1,
        b1,
        meta: ModelMeta {
            stage,
            seed,
            loss_param,
        },
    })
}

/// Writes the model file at `path`.
pub fn save_model(m: &SnnModel, path: &Path) -> Result<()> {
    std::fs::write(path, model_to_bytes(m))?;
    Ok(())
}

/// Reads a model file, verifying checksum, version, and shapes.
pub fn load_model(path: &Path) -> Result<SnnModel> {
    let data = std::fs::read(path)?;
    model_from_bytes(&data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crc64_known_vector() {
        assert_eq!(crc64(b"123456789"), 0x995DC9BBDF1939FA);
        assert_eq!(crc64(b""), 0);
    }

    fn bits_equal(a: &SnnModel, b: &SnnModel) -> bool {
        a.flat()
            .iter()
            .zip(b.flat().iter())
            .all(|(x, y)| x.to_bits() == y.to_bits())
            && a.meta.stage == b.meta.stage
            && a.meta.seed == b.meta.seed
            && a.meta.loss_param.to_bits() == b.meta.loss_param.to_bits()
    }

    #[test]
    fn round_trip_zero_model() {
        let m = SnnModel::zeros(ModelMeta {
            stage: StageTag::Init,
            seed: 1,
            loss_param: 0.0,
        });
        let back = model_from_bytes(&model_to_bytes(&m)).unwrap();
        assert!(bits_equal(&m, &back));
    }

    #[test]
    fn round_trip_random_model_bit_exact() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let mut m = SnnModel::zeros(ModelMeta {
            stage: StageTag::Snn2,
            seed: 0xDEADBEEF,
            loss_param: 2.5,
        });
        for v in m.w0.iter_mut().flatten() {
            *v = rng.gen_range(-1.0..1.0);
        }
        for v in m.b0.iter_mut() {
            *v = rng.gen_range(-1.0..1.0);
        }
        for v in m.w1.iter_mut().flatten() {
            *v = rng.gen_range(-1.0..1.0);
        }
        for v in m.b1.iter_mut() {
            *v = rng.gen_range(-1.0..1.0);
        }

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.wsnn");
        save_model(&m, &path).unwrap();
        let back = load_model(&path).unwrap();
        assert!(bits_equal(&m, &back));
    }

    #[test]
    fn corrupted_byte_fails_checksum() {
        let m = SnnModel::zeros(ModelMeta {
            stage: StageTag::Snn1,
            seed: 7,
            loss_param: 35.0,
        });
        let mut bytes = model_to_bytes(&m);
        let mid = bytes.len() / 2;
        bytes[mid] ^= 0x40;
        match model_from_bytes(&bytes) {
            Err(Error::ChecksumMismatch { .. }) => {}
            other => panic!("expected checksum mismatch, got {other:?}"),
        }
    }

    #[test]
    fn version_and_shape_and_magic_errors_are_distinct() {
        let m = SnnModel::zeros(ModelMeta {
            stage: StageTag::Init,
            seed: 0,
            loss_param: 0.0,
        });
        let good = model_to_bytes(&m);

        let refresh_crc = |mut b: Vec<u8>| {
            let n = b.len() - 8;
            let crc = crc64(&b[..n]);
            b[n..].copy_from_slice(&crc.to_le_bytes());
            b
        };

        let mut bad_magic = good.clone();
        bad_magic[0] = b'X';
        let bad_magic = refresh_crc(bad_magic);
        assert!(matches!(model_from_bytes(&bad_magic), Err(Error::BadMagic)));

        let mut bad_version = good.clone();
        bad_version[4..8].copy_from_slice(&9u32.to_le_bytes());
        let bad_version = refresh_crc(bad_version);
        assert!(matches!(
            model_from_bytes(&bad_version),
            Err(Error::UnsupportedVersion(9))
        ));

        let mut bad_shape = good.clone();
        bad_shape[12..16].copy_from_slice(&8u32.to_le_bytes());
        let bad_shape = refresh_crc(bad_shape);
        assert!(matches!(
            model_from_bytes(&bad_shape),
            Err(Error::ShapeMismatch { .. })
        ));

        let short = &good[..40];
        assert!(model_from_bytes(short).is_err());
    }
}
