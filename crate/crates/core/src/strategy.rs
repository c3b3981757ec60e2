//! Interchangeable multiplication algorithms, registered by name.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::matrix::DenseBinaryMatrix;
use crate::plm::Plm;
use crate::structural::structural_multiply;

pub trait MulStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn multiply(&self, a: &Plm, b: &Plm) -> Result<Plm>;
}

/// Column-map composition.
pub struct Compose;

impl MulStrategy for Compose {
    fn name(&self) -> &'static str {
        "compose"
    }

    fn multiply(&self, a: &Plm, b: &Plm) -> Result<Plm> {
        a.multiply(b)
    }
}

/// Block-formula dispatch on the classes of both factors.
pub struct Structural;

impl MulStrategy for Structural {
    fn name(&self) -> &'static str {
        "structural"
    }

    fn multiply(&self, a: &Plm, b: &Plm) -> Result<Plm> {
        structural_multiply(a, b)
    }
}

/// Textbook integer product of the dense forms, read back as a PLM.
pub struct Dense;

impl MulStrategy for Dense {
    fn name(&self) -> &'static str {
        "dense"
    }

    fn multiply(&self, a: &Plm, b: &Plm) -> Result<Plm> {
        let c = dense_multiply(&a.to_dense(), &b.to_dense())?;
        Plm::from_dense(&c)
    }
}

/// Ordinary matrix product over the integers. Entries above 1 are reported as an error
/// since the result is carried in a binary matrix.
pub fn dense_multiply(a: &DenseBinaryMatrix, b: &DenseBinaryMatrix) -> Result<DenseBinaryMatrix> {
    let d = a.dim();
    if d != b.dim() {
        return Err(Error::DimensionMismatch {
            left: d,
            right: b.dim(),
        });
    }
    let mut c = DenseBinaryMatrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            let s: u32 = (0..d)
                .map(|p| a.get(i, p) as u32 * b.get(p, j) as u32)
                .sum();
            if s > 1 {
                return Err(Error::NotBinary {
                    row: i + 1,
                    column: j + 1,
                });
            }
            c.set(i, j, s == 1);
        }
    }
    Ok(c)
}

#[derive(Clone, Default)]
pub struct MulRegistry {
    strategies: BTreeMap<&'static str, Arc<dyn MulStrategy>>,
}

impl MulRegistry {
    pub fn builtin() -> Self {
        let mut r = Self::default();
        r.register(Arc::new(Compose));
        r.register(Arc::new(Structural));
        r.register(Arc::new(Dense));
        r
    }

    pub fn register(&mut self, s: Arc<dyn MulStrategy>) {
        self.strategies.insert(s.name(), s);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn MulStrategy>> {
        self.strategies
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownStrategy(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.strategies.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<dyn MulStrategy>> {
        self.strategies.values()
    }
}
