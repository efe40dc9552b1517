//! Finite fields, species over `F_q`, and the category of finite-dimensional
//! representations of the associated tensor algebra: enumeration of
//! isomorphism classes, Hom/Ext/Aut, submodules and Hall numbers.

pub mod classes;
pub mod field;
pub mod homs;
pub mod linalg;
pub mod rep;
pub mod species;
pub mod submodules;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

pub use classes::{gl_order, ClassEntry, ClassTable};
pub use field::FiniteField;
pub use homs::hom_dim;
pub use linalg::Mat;
pub use rep::{DimVec, IsoClassId, QuiverRep};
pub use species::{species_from_quiver, ArrowBimodule, SpeciesSpec, VertexField};
pub use submodules::{all_submodules, submodules_with_dims, Submodule, Subspace};

use crate::cartan::{CartanError, QuiverSpec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("no field table entry for p={p}, e={e}")]
    FieldTableMiss { p: u32, e: u32 },
    #[error("valuation ({d_st},{d_ts}) on {src}->{tgt} is not realizable by copies of a composite field")]
    UnsupportedValuation { src: String, tgt: String, d_st: u32, d_ts: u32 },
    #[error("quiver has an oriented cycle; the tensor algebra would be infinite-dimensional")]
    CyclicQuiver,
    #[error("cap exceeded: {what} is {size}, cap {cap}")]
    CapExceeded { what: String, size: u64, cap: u64 },
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("invalid representation: {0}")]
    InvalidRep(String),
    #[error("unknown isomorphism class {0}")]
    UnknownClass(String),
    #[error("negative Ext dimension ({0}); internal inconsistency")]
    NegativeExt(i64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Quiver(#[from] CartanError),
}

/// Size bounds; exceeding any of them is an error, never a truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    /// Largest total `k`-dimension for which classes are enumerated.
    pub enum_dim: u32,
    /// Largest total `k`-dimension of a representation whose class is
    /// looked up from arbitrary arrow matrices.
    pub canon_dim: u32,
    /// Largest number of arrow tuples walked by one enumeration.
    pub max_points: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Self { enum_dim: 8, canon_dim: 6, max_points: 1 << 20 }
    }
}

/// Quiver file plus field order and optional caps.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpeciesFile {
    #[serde(flatten)]
    pub quiver: QuiverSpec,
    #[serde(default)]
    pub q: Option<u32>,
    #[serde(default)]
    pub caps: Option<Caps>,
}

impl SpeciesFile {
    pub fn from_json(text: &str) -> Result<Self, ModError> {
        serde_json::from_str(text).map_err(|e| ModError::Parse(e.to_string()))
    }
}

/// One row of a module table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleRow {
    pub id: String,
    pub dimvec: Vec<u32>,
    pub orbit_size: u64,
    /// Decimal string: automorphism groups outgrow 64 bits quickly.
    pub aut_order: String,
}

fn check_cap(what: &str, size: u64, cap: u64) -> Result<(), ModError> {
    if size > cap {
        return Err(ModError::CapExceeded { what: what.into(), size, cap });
    }
    Ok(())
}

type Histogram = BTreeMap<(usize, usize), u64>;

/// A species together with lazily built, cached class tables and Hall
/// histograms. Caches are filled deterministically, so concurrent use
/// yields the same values as sequential use.
#[derive(Debug)]
pub struct ModCat {
    species: SpeciesSpec,
    caps: Caps,
    tables: Mutex<BTreeMap<DimVec, Arc<ClassTable>>>,
    histograms: Mutex<HashMap<(DimVec, usize, DimVec), Arc<Histogram>>>,
}

impl ModCat {
    pub fn new(species: SpeciesSpec, caps: Caps) -> Self {
        Self { species, caps, tables: Mutex::new(BTreeMap::new()), histograms: Mutex::new(HashMap::new()) }
    }

    pub fn species(&self) -> &SpeciesSpec {
        &self.species
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    pub fn q(&self) -> u32 {
        self.species.q()
    }

    pub fn table(&self, dims: &[u32]) -> Result<Arc<ClassTable>, ModError> {
        if let Some(t) = self.tables.lock().expect("table cache lock").get(dims) {
            return Ok(t.clone());
        }
        let t = Arc::new(ClassTable::build(&self.species, dims, &self.caps)?);
        let mut guard = self.tables.lock().expect("table cache lock");
        Ok(guard.entry(dims.to_vec()).or_insert(t).clone())
    }

    /// The class of an arbitrary (valid) representation.
    pub fn class_of(&self, rep: &QuiverRep) -> Result<IsoClassId, ModError> {
        check_cap("total k-dimension", self.species.total_k_dim(rep.dims()) as u64, self.caps.canon_dim as u64)?;
        let t = self.table(rep.dims())?;
        Ok(t.classes()[t.index_of(self.q(), rep)].id.clone())
    }

    pub fn entry(&self, id: &IsoClassId) -> Result<ClassEntry, ModError> {
        if id.dims().len() != self.species.vertex_count() {
            return Err(ModError::UnknownClass(id.to_hex()));
        }
        let t = self.table(id.dims())?;
        let i = t.position(id).ok_or_else(|| ModError::UnknownClass(id.to_hex()))?;
        Ok(t.classes()[i].clone())
    }

    pub fn rep_of(&self, id: &IsoClassId) -> Result<QuiverRep, ModError> {
        Ok(self.entry(id)?.rep)
    }

    /// Counts of `(quotient class, sub class)` over the subrepresentations
    /// of the `gamma`-th class of `dims` with dimension vector `sub_dims`.
    fn histogram(&self, dims: &[u32], gamma: usize, sub_dims: &[u32]) -> Result<Arc<Histogram>, ModError> {
        let key = (dims.to_vec(), gamma, sub_dims.to_vec());
        if let Some(h) = self.histograms.lock().expect("histogram cache lock").get(&key) {
            return Ok(h.clone());
        }
        let gt = self.table(dims)?;
        let qdims: DimVec = dims.iter().zip(sub_dims).map(|(a, b)| a - b).collect();
        let st = self.table(sub_dims)?;
        let qt = self.table(&qdims)?;
        let mut hist = Histogram::new();
        for sm in submodules_with_dims(&self.species, &gt.classes()[gamma].rep, sub_dims) {
            let b = st.index_of(self.q(), &sm.sub);
            let a = qt.index_of(self.q(), &sm.quotient);
            *hist.entry((a, b)).or_insert(0) += 1;
        }
        let hist = Arc::new(hist);
        let mut guard = self.histograms.lock().expect("histogram cache lock");
        Ok(guard.entry(key).or_insert(hist).clone())
    }

    /// `g^γ_{αβ}`: submodules `L' ⊆ L_γ` with `L' ≅ β` and `L/L' ≅ α`.
    pub fn hall_number(&self, gamma: &IsoClassId, alpha: &IsoClassId, beta: &IsoClassId) -> Result<u64, ModError> {
        let sum: DimVec = alpha.dims().iter().zip(beta.dims()).map(|(a, b)| a + b).collect();
        if sum != gamma.dims() || alpha.dims().len() != self.species.vertex_count() {
            return Err(ModError::DimMismatch("dims(gamma) must equal dims(alpha) + dims(beta)".into()));
        }
        let gt = self.table(gamma.dims())?;
        let gi = gt.position(gamma).ok_or_else(|| ModError::UnknownClass(gamma.to_hex()))?;
        let ai = self.table(alpha.dims())?.position(alpha).ok_or_else(|| ModError::UnknownClass(alpha.to_hex()))?;
        let bi = self.table(beta.dims())?.position(beta).ok_or_else(|| ModError::UnknownClass(beta.to_hex()))?;
        let h = self.histogram(gamma.dims(), gi, beta.dims())?;
        Ok(h.get(&(ai, bi)).copied().unwrap_or(0))
    }

    /// All nonzero `g^γ_{αβ}` for fixed `α`, `β`, as `(γ index, count)` in
    /// the table of `dims(α) + dims(β)`.
    pub fn hall_row(&self, alpha: &IsoClassId, beta: &IsoClassId) -> Result<Vec<(usize, u64)>, ModError> {
        let sum: DimVec = alpha.dims().iter().zip(beta.dims()).map(|(a, b)| a + b).collect();
        let gt = self.table(&sum)?;
        let ai = self.table(alpha.dims())?.position(alpha).ok_or_else(|| ModError::UnknownClass(alpha.to_hex()))?;
        let bi = self.table(beta.dims())?.position(beta).ok_or_else(|| ModError::UnknownClass(beta.to_hex()))?;
        let mut out = Vec::new();
        for g in 0..gt.len() {
            let h = self.histogram(&sum, g, beta.dims())?;
            if let Some(&c) = h.get(&(ai, bi)) {
                out.push((g, c));
            }
        }
        Ok(out)
    }

    pub fn aut_order(&self, rep: &QuiverRep) -> Result<BigUint, ModError> {
        let t = self.table(rep.dims())?;
        Ok(t.classes()[t.index_of(self.q(), rep)].aut_order.clone())
    }

    pub fn ext_dim(&self, m: &QuiverRep, n: &QuiverRep) -> Result<u32, ModError> {
        ext_dim(&self.species, m, n)
    }

    pub fn module_table(&self, dims: &[u32]) -> Result<Vec<ModuleRow>, ModError> {
        let t = self.table(dims)?;
        Ok(t.classes()
            .iter()
            .map(|c| ModuleRow {
                id: c.id.to_hex(),
                dimvec: dims.to_vec(),
                orbit_size: c.orbit_size,
                aut_order: c.aut_order.to_string(),
            })
            .collect())
    }
}

/// Ordered list of `(class, canonical representative, orbit size)`.
pub fn iso_classes(s: &SpeciesSpec, d: &[u32]) -> Result<Vec<(IsoClassId, QuiverRep, u64)>, ModError> {
    let t = ClassTable::build(s, d, &Caps::default())?;
    Ok(t.classes().iter().map(|c| (c.id.clone(), c.rep.clone(), c.orbit_size)).collect())
}

pub fn tensor_algebra_dim(s: &SpeciesSpec) -> u64 {
    s.tensor_algebra_dim()
}

pub fn euler_form(s: &SpeciesSpec, a: &[u32], b: &[u32]) -> i64 {
    s.euler_form(a, b)
}

/// `hom_dim(m, n) - ⟨dims m, dims n⟩`; the tensor algebra is hereditary so
/// this is `dim_k Ext^1(m, n)`.
pub fn ext_dim(s: &SpeciesSpec, m: &QuiverRep, n: &QuiverRep) -> Result<u32, ModError> {
    let e = hom_dim(s, m, n) as i64 - s.euler_form(m.dims(), n.dims());
    if e < 0 {
        return Err(ModError::NegativeExt(e));
    }
    Ok(e as u32)
}

/// `|Ext^1(m, m)| = q^{ext_dim(m, m)}`.
pub fn ext_self_card(s: &SpeciesSpec, m: &QuiverRep) -> Result<BigUint, ModError> {
    Ok(BigUint::from(s.q()).pow(ext_dim(s, m, m)?))
}

/// `|Aut(m)|` by orbit-stabilizer.
pub fn aut_order(s: &SpeciesSpec, m: &QuiverRep) -> Result<BigUint, ModError> {
    let t = ClassTable::build(s, m.dims(), &Caps::default())?;
    Ok(t.classes()[t.index_of(s.q(), m)].aut_order.clone())
}

pub fn submodules(s: &SpeciesSpec, m: &QuiverRep) -> Vec<Submodule> {
    all_submodules(s, m)
}

pub fn hall_number(s: &SpeciesSpec, gamma: &IsoClassId, alpha: &IsoClassId, beta: &IsoClassId) -> Result<u64, ModError> {
    ModCat::new(s.clone(), Caps::default()).hall_number(gamma, alpha, beta)
}
