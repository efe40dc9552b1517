//! Twisted Ringel-Hall algebras over a fixed finite field.
//!
//! Products follow `u_α u_β = v^{⟨|α|,|β|⟩} Σ_γ g^γ_{αβ} u_γ` with `v = √q`,
//! where `g^γ_{αβ}` counts submodules isomorphic to `β` with quotient
//! isomorphic to `α`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use crate::cartan::{borcherds_from_form, pm_quiver, BorcherdsCartanMatrix, CartanError, IndexDatum, ValuedQuiver};
use crate::modcat::{
    ext_self_card, species_from_quiver, Caps, DimVec, IsoClassId, ModCat, ModError, QuiverRep, SpeciesSpec,
};
use crate::presver::{serre_sum, NCExpr};
use crate::qlaurent::QScalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HallError {
    #[error(transparent)]
    Mod(#[from] ModError),
    #[error(transparent)]
    Quiver(#[from] CartanError),
    #[error("unknown isomorphism class {0}")]
    UnknownClass(String),
    #[error("generator {0} is not bound")]
    UnboundGenerator(String),
    #[error("coefficient {0} has a pole at v = √q")]
    Pole(String),
    #[error("elements belong to different fields (q={0} and q={1})")]
    FieldMismatch(u64, u64),
    #[error("not a ± quiver of the base quiver: {0}")]
    NotPmQuiver(String),
    #[error("unknown relation {0:?}")]
    UnknownRelation(String),
}

/// Diagonal entry `a_α` of Green's form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `a_α = |Ext¹(M, M)|`.
    #[default]
    ExtCard,
    /// `a_α = |Aut M|`.
    AutOrder,
}

impl Normalization {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ext-card" => Some(Self::ExtCard),
            "aut-order" => Some(Self::AutOrder),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::ExtCard => "ext-card",
            Self::AutOrder => "aut-order",
        }
    }
}

/// A finite combination of isomorphism classes with coefficients in `Q(√q)`.
#[derive(Clone, PartialEq, Eq)]
pub struct HallElem {
    q: u64,
    terms: BTreeMap<IsoClassId, QScalar>,
}

impl HallElem {
    pub fn zero(q: u64) -> Self {
        Self { q, terms: BTreeMap::new() }
    }

    pub fn basis(id: IsoClassId, q: u64) -> Self {
        Self::zero(q).with_term(id, QScalar::one(q))
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IsoClassId, &QScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, id: &IsoClassId) -> QScalar {
        self.terms.get(id).cloned().unwrap_or_else(|| QScalar::zero(self.q))
    }

    /// Adds `c·u_id`, dropping the entry if it cancels.
    pub fn add_term(&mut self, id: IsoClassId, c: QScalar) {
        if c.is_zero() {
            return;
        }
        let q = self.q;
        let slot = self.terms.entry(id.clone()).or_insert_with(|| QScalar::zero(q));
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&id);
        }
    }

    fn with_term(mut self, id: IsoClassId, c: QScalar) -> Self {
        self.add_term(id, c);
        self
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.q);
        }
        Self { q: self.q, terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    /// Dimension vectors of the support.
    pub fn support_dims(&self) -> BTreeSet<DimVec> {
        self.terms.keys().map(|k| k.dims().to_vec()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms.iter().map(|(k, v)| json!({ "id": k.to_hex(), "coeff": v.to_string() })).collect(),
        )
    }
}

impl fmt::Display for HallElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, v)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({v}) u[{k}]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for HallElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &HallElem {
    type Output = HallElem;
    fn add(self, rhs: &HallElem) -> HallElem {
        assert_eq!(self.q, rhs.q, "HallElem values over different q");
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }
}

impl Sub for &HallElem {
    type Output = HallElem;
    fn sub(self, rhs: &HallElem) -> HallElem {
        self + &(-rhs)
    }
}

impl Neg for &HallElem {
    type Output = HallElem;
    fn neg(self) -> HallElem {
        HallElem { q: self.q, terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect() }
    }
}

impl Add for HallElem {
    type Output = HallElem;
    fn add(self, rhs: HallElem) -> HallElem {
        &self + &rhs
    }
}

impl Sub for HallElem {
    type Output = HallElem;
    fn sub(self, rhs: HallElem) -> HallElem {
        &self - &rhs
    }
}

/// Result of [`HallCtx::lperp`]: an orthogonal basis of `L_ν^⊥` and the
/// Green norms `[b, b]` of the returned vectors.
#[derive(Debug, Clone)]
pub struct LPerp {
    pub basis: Vec<HallElem>,
    pub norms: Vec<QScalar>,
    /// True when every vector could be scaled to norm 1 inside `Q(√q)`.
    pub orthonormal: bool,
}

/// Hall algebra of one species. Class tables and Hall histograms are cached
/// inside the wrapped [`ModCat`].
#[derive(Debug)]
pub struct HallCtx {
    cat: ModCat,
}

impl HallCtx {
    pub fn new(species: SpeciesSpec, caps: Caps) -> Self {
        Self { cat: ModCat::new(species, caps) }
    }

    pub fn from_quiver(quiver: &ValuedQuiver, q: u32, caps: Caps) -> Result<Self, HallError> {
        Ok(Self::new(species_from_quiver(quiver, q)?, caps))
    }

    pub fn cat(&self) -> &ModCat {
        &self.cat
    }

    pub fn species(&self) -> &SpeciesSpec {
        self.cat.species()
    }

    pub fn q(&self) -> u64 {
        self.cat.q() as u64
    }

    /// Largest total `k`-dimension reachable by products.
    pub fn grading_cap(&self) -> u32 {
        self.cat.caps().enum_dim
    }

    /// Class ids of `H_ν` in id order.
    pub fn classes(&self, nu: &[u32]) -> Result<Vec<IsoClassId>, HallError> {
        Ok(self.cat.table(nu)?.classes().iter().map(|c| c.id.clone()).collect())
    }

    pub fn u(&self, id: &IsoClassId) -> Result<HallElem, HallError> {
        if id.dims().len() != self.species().vertex_count() || self.cat.table(id.dims())?.position(id).is_none() {
            return Err(HallError::UnknownClass(id.to_hex()));
        }
        Ok(HallElem::basis(id.clone(), self.q()))
    }

    /// The identity `u_0`.
    pub fn one(&self) -> HallElem {
        HallElem::basis(IsoClassId::zero(self.species().vertex_count()), self.q())
    }

    pub fn simple_class(&self, i: usize) -> Result<IsoClassId, HallError> {
        Ok(self.cat.class_of(&QuiverRep::simple(self.species(), i))?)
    }

    /// `u_i`, the class of the simple at vertex `i`.
    pub fn simple(&self, i: usize) -> Result<HallElem, HallError> {
        Ok(HallElem::basis(self.simple_class(i)?, self.q()))
    }

    fn check_q(&self, x: &HallElem) -> Result<(), HallError> {
        if x.q != self.q() {
            return Err(HallError::FieldMismatch(x.q, self.q()));
        }
        Ok(())
    }

    /// Product of two basis elements.
    pub fn mul_basis(&self, a: &IsoClassId, b: &IsoClassId) -> Result<HallElem, HallError> {
        let q = self.q();
        let sum: DimVec = a.dims().iter().zip(b.dims()).map(|(x, y)| x + y).collect();
        let table = self.cat.table(&sum)?;
        let twist = QScalar::v_pow(self.species().euler_form(a.dims(), b.dims()), q);
        let mut out = HallElem::zero(q);
        for (g, count) in self.cat.hall_row(a, b)? {
            out.add_term(table.classes()[g].id.clone(), &twist * &QScalar::from_int(count as i64, q));
        }
        Ok(out)
    }

    pub fn mul(&self, x: &HallElem, y: &HallElem) -> Result<HallElem, HallError> {
        self.check_q(x)?;
        self.check_q(y)?;
        let mut out = HallElem::zero(self.q());
        for (a, ca) in &x.terms {
            for (b, cb) in &y.terms {
                let c = ca * cb;
                for (g, cg) in self.mul_basis(a, b)?.terms {
                    out.add_term(g, &c * &cg);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, x: &HallElem, n: u32) -> Result<HallElem, HallError> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    /// `a_α` under the chosen normalization.
    pub fn a_alpha(&self, id: &IsoClassId, norm: Normalization) -> Result<BigUint, HallError> {
        let entry = self.cat.entry(id)?;
        Ok(match norm {
            Normalization::ExtCard => ext_self_card(self.species(), &entry.rep)?,
            Normalization::AutOrder => entry.aut_order,
        })
    }

    fn inv_a(&self, id: &IsoClassId, norm: Normalization) -> Result<QScalar, HallError> {
        let a = self.a_alpha(id, norm)?;
        let r = BigRational::new(1.into(), a.into());
        Ok(QScalar::rational(r, self.q()))
    }

    /// `[x, y] = Σ_α x_α y_α / a_α`.
    pub fn green_form(&self, x: &HallElem, y: &HallElem, norm: Normalization) -> Result<QScalar, HallError> {
        self.check_q(x)?;
        self.check_q(y)?;
        let mut acc = QScalar::zero(self.q());
        for (k, cx) in &x.terms {
            if let Some(cy) = y.terms.get(k) {
                acc = &acc + &(&(cx * cy) * &self.inv_a(k, norm)?);
            }
        }
        Ok(acc)
    }

    /// Echelonized basis of `L_ν = Σ H_β H_γ` over `β + γ = ν`, `β, γ ≠ 0`.
    pub fn l_space(&self, nu: &[u32]) -> Result<Vec<HallElem>, HallError> {
        let cols = self.classes(nu)?;
        let mut rows = Vec::new();
        for beta in sub_dimvecs(nu) {
            if beta.iter().all(|&x| x == 0) || beta == nu {
                continue;
            }
            let gamma: DimVec = nu.iter().zip(&beta).map(|(n, b)| n - b).collect();
            for a in self.classes(&beta)? {
                for b in self.classes(&gamma)? {
                    rows.push(coords(&self.mul_basis(&a, &b)?, &cols));
                }
            }
        }
        let q = self.q();
        Ok(echelon(rows, cols.len(), q).into_iter().map(|r| from_coords(&r, &cols, q)).collect())
    }

    /// Orthogonal complement of `L_ν` in `H_ν` under Green's form, with
    /// Gram-Schmidt orthogonalization and normalization where `Q(√q)`
    /// contains the needed square roots.
    pub fn lperp(&self, nu: &[u32], norm: Normalization) -> Result<LPerp, HallError> {
        let q = self.q();
        let cols = self.classes(nu)?;
        let weights: Vec<QScalar> = cols.iter().map(|c| self.inv_a(c, norm)).collect::<Result<_, _>>()?;
        let rows: Vec<Vec<QScalar>> = self
            .l_space(nu)?
            .iter()
            .map(|l| coords(l, &cols).iter().zip(&weights).map(|(x, w)| x * w).collect())
            .collect();
        let null = nullspace(rows, cols.len(), q);
        let form = |x: &[QScalar], y: &[QScalar]| {
            x.iter().zip(y).zip(&weights).fold(QScalar::zero(q), |acc, ((a, b), w)| &acc + &(&(a * b) * w))
        };
        let mut ortho: Vec<(Vec<QScalar>, QScalar)> = Vec::new();
        for v in null {
            let mut w = v.clone();
            for (b, nb) in &ortho {
                let c = &form(&v, b) * &nb.inv().expect("nonzero Green norm");
                w = w.iter().zip(b).map(|(x, y)| x - &(&c * y)).collect();
            }
            let n = form(&w, &w);
            ortho.push((w, n));
        }
        let mut orthonormal = true;
        let mut basis = Vec::new();
        let mut norms = Vec::new();
        for (w, n) in ortho {
            match n.sqrt().and_then(|s| s.inv()) {
                Some(s) => {
                    let scaled: Vec<QScalar> = w.iter().map(|x| x * &s).collect();
                    basis.push(from_coords(&scaled, &cols, q));
                    norms.push(QScalar::one(q));
                }
                None => {
                    orthonormal = false;
                    basis.push(from_coords(&w, &cols, q));
                    norms.push(n);
                }
            }
        }
        Ok(LPerp { basis, norms, orthonormal })
    }

    /// Substitutes `binding` into `expr` and evaluates with the Hall product.
    pub fn eval_nc(&self, expr: &NCExpr, binding: &BTreeMap<String, HallElem>) -> Result<HallElem, HallError> {
        let q = self.q();
        let mut out = HallElem::zero(q);
        for (word, coeff) in expr.terms() {
            let c = coeff.eval_sqrt_q(q).ok_or_else(|| HallError::Pole(coeff.to_string()))?;
            let mut acc = self.one();
            for sym in word {
                let x = binding.get(sym).ok_or_else(|| HallError::UnboundGenerator(sym.clone()))?;
                acc = self.mul(&acc, x)?;
            }
            out = &out + &acc.scale(&c);
        }
        Ok(out)
    }

    /// Index data and symmetric Euler pairings of the given generators,
    /// assembled into a Borcherds-Cartan matrix.
    pub fn borcherds_matrix(&self, gens: &[Generator]) -> Result<BorcherdsCartanMatrix, HallError> {
        let s = self.species();
        let pairings: Vec<Vec<i64>> =
            gens.iter().map(|a| gens.iter().map(|b| s.symmetric_form(&a.dims, &b.dims)).collect()).collect();
        let data: Vec<IndexDatum> = gens
            .iter()
            .zip(&pairings)
            .enumerate()
            .map(|(i, (g, row))| IndexDatum { id: g.label.clone(), self_pairing: row[i], is_simple: g.real })
            .collect();
        Ok(borcherds_from_form(&data, &pairings)?)
    }
}

/// All dimension vectors `β ≤ ν` componentwise, in lexicographic order.
pub fn sub_dimvecs(nu: &[u32]) -> Vec<DimVec> {
    let mut out = vec![Vec::new()];
    for &n in nu {
        out = out.into_iter().flat_map(|p: DimVec| (0..=n).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Nonzero dimension vectors with total `k`-dimension at most `bound`,
/// ordered by total dimension, then lexicographically.
pub fn graded_dims(s: &SpeciesSpec, bound: u32) -> Vec<DimVec> {
    let n = s.vertex_count();
    let caps: Vec<u32> = (0..n).map(|i| bound / s.d(i)).collect();
    let mut out: Vec<DimVec> = sub_dimvecs(&caps)
        .into_iter()
        .filter(|d| d.iter().any(|&x| x > 0) && s.total_k_dim(d) <= bound)
        .collect();
    out.sort_by_key(|d| (s.total_k_dim(d), d.clone()));
    out
}

fn coords(x: &HallElem, cols: &[IsoClassId]) -> Vec<QScalar> {
    cols.iter().map(|c| x.coeff(c)).collect()
}

fn from_coords(v: &[QScalar], cols: &[IsoClassId], q: u64) -> HallElem {
    let mut out = HallElem::zero(q);
    for (c, x) in cols.iter().zip(v) {
        out.add_term(c.clone(), x.clone());
    }
    out
}

/// Reduced row echelon form; pivots are the first nonzero column of each
/// row in column order. Zero rows are dropped.
fn echelon(mut rows: Vec<Vec<QScalar>>, ncols: usize, q: u64) -> Vec<Vec<QScalar>> {
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].inv().expect("pivot is nonzero");
        rows[rank] = rows[rank].iter().map(|x| x * &inv).collect();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                rows[r] = rows[r].iter().zip(&rows[rank]).map(|(x, y)| x - &(&f * y)).collect();
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    debug_assert!(rows.iter().all(|r| r.iter().all(|x| x.q() == q)));
    rows
}

fn nullspace(rows: Vec<Vec<QScalar>>, ncols: usize, q: u64) -> Vec<Vec<QScalar>> {
    let ech = echelon(rows, ncols, q);
    let pivots: Vec<usize> = ech.iter().map(|r| r.iter().position(|x| !x.is_zero()).expect("nonzero row")).collect();
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![QScalar::zero(q); ncols];
            v[free] = QScalar::one(q);
            for (r, &p) in ech.iter().zip(&pivots) {
                v[p] = -&r[free];
            }
            v
        })
        .collect()
}

/// Which copy of the base quiver inside `Γ^±`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> &'static str {
        match self {
            Self::Plus => "+",
            Self::Minus => "-",
        }
    }

    fn idx(self) -> usize {
        self as usize
    }
}

/// Vertex and arrow positions of the two copies of `Γ` inside `Γ^±`.
#[derive(Debug, Clone)]
pub struct PmEmbedding {
    vertex_map: [Vec<usize>; 2],
    arrow_map: [Vec<usize>; 2],
    pm_vertices: usize,
}

impl PmEmbedding {
    pub fn new(base: &SpeciesSpec, pm: &SpeciesSpec) -> Result<Self, HallError> {
        let pm_ids = pm.quiver().vertices();
        let base_ids = base.quiver().vertices();
        let mut vertex_map = [Vec::new(), Vec::new()];
        for sign in [Sign::Plus, Sign::Minus] {
            for id in base_ids {
                let want = format!("{}×{id}", sign.symbol());
                let j = pm_ids
                    .iter()
                    .position(|v| *v == want)
                    .ok_or_else(|| HallError::NotPmQuiver(format!("missing vertex {want}")))?;
                vertex_map[sign.idx()].push(j);
            }
        }
        let mut arrow_map = [Vec::new(), Vec::new()];
        for sign in [Sign::Plus, Sign::Minus] {
            let vm = &vertex_map[sign.idx()];
            let mut used = vec![false; pm.arrows().len()];
            for a in base.arrows() {
                let (s, t) = (vm[a.src], vm[a.tgt]);
                let k = pm
                    .arrows()
                    .iter()
                    .enumerate()
                    .position(|(k, b)| !used[k] && b.src == s && b.tgt == t)
                    .ok_or_else(|| HallError::NotPmQuiver(format!("missing arrow {s}->{t}")))?;
                let b = &pm.arrows()[k];
                if b.copies != a.copies || b.composite_degree != a.composite_degree {
                    return Err(HallError::NotPmQuiver("arrow bimodules differ between copies".into()));
                }
                used[k] = true;
                arrow_map[sign.idx()].push(k);
            }
        }
        Ok(Self { vertex_map, arrow_map, pm_vertices: pm.vertex_count() })
    }

    pub fn embed_dims(&self, sign: Sign, dims: &[u32]) -> DimVec {
        let mut out = vec![0; self.pm_vertices];
        for (i, &j) in self.vertex_map[sign.idx()].iter().enumerate() {
            out[j] = dims[i];
        }
        out
    }

    /// The same representation on one copy, zero elsewhere, zero bridges.
    pub fn embed_rep(&self, pm: &SpeciesSpec, sign: Sign, rep: &QuiverRep) -> Result<QuiverRep, HallError> {
        let dims = self.embed_dims(sign, rep.dims());
        let mut maps = QuiverRep::zero_maps(pm, dims.clone()).maps().to_vec();
        for (a, &k) in self.arrow_map[sign.idx()].iter().enumerate() {
            maps[k] = rep.maps()[a].clone();
        }
        Ok(QuiverRep::new(pm, dims, maps)?)
    }
}

/// `α ↦ α^±` on class ids.
pub fn embed_pm(base: &HallCtx, pm: &HallCtx, emb: &PmEmbedding, sign: Sign, id: &IsoClassId) -> Result<IsoClassId, HallError> {
    let rep = base.cat().rep_of(id).map_err(|_| HallError::UnknownClass(id.to_hex()))?;
    Ok(pm.cat().class_of(&emb.embed_rep(pm.species(), sign, &rep)?)?)
}

/// Status of one checked instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Violated,
    Vacuous,
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub relation: String,
    pub instance: serde_json::Value,
    pub status: Status,
    pub residue_terms: usize,
    pub millis: u64,
}

/// Relation families that hold inside `H(Λ^±)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Relation {
    SerrePlus,
    CommutePlus,
    SerreMinus,
    CommuteMinus,
    SerreMixed,
    SerreImaginary,
    CommuteMixed,
}

impl Relation {
    pub const ALL: [Relation; 7] = [
        Self::SerrePlus,
        Self::CommutePlus,
        Self::SerreMinus,
        Self::CommuteMinus,
        Self::SerreMixed,
        Self::SerreImaginary,
        Self::CommuteMixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::SerrePlus => "1+",
            Self::CommutePlus => "2+",
            Self::SerreMinus => "1-",
            Self::CommuteMinus => "2-",
            Self::SerreMixed => "1pm",
            Self::SerreImaginary => "2pm",
            Self::CommuteMixed => "3pm",
        }
    }

    pub fn parse(s: &str) -> Result<Self, HallError> {
        Self::ALL.into_iter().find(|r| r.name() == s).ok_or_else(|| HallError::UnknownRelation(s.into()))
    }

    /// Comma-separated names, or `all`.
    pub fn parse_list(s: &str) -> Result<Vec<Self>, HallError> {
        if s.trim() == "all" {
            return Ok(Self::ALL.to_vec());
        }
        s.split(',').map(|t| Self::parse(t.trim())).collect()
    }
}

/// A generator `u_i` of `H(Λ)`: a simple class (real) or an element of an
/// orthogonal basis of some `L_ν^⊥` with `ν` not simple (imaginary).
#[derive(Debug, Clone)]
pub struct Generator {
    pub label: String,
    pub dims: DimVec,
    pub elem: HallElem,
    pub real: bool,
    /// Base vertex of a real generator.
    pub vertex: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub normalization: Normalization,
    /// Imaginary generators are searched in degrees up to this total
    /// `k`-dimension.
    pub imaginary_dim: u32,
    /// Record wall-clock milliseconds; off keeps reports byte-stable.
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { normalization: Normalization::ExtCard, imaginary_dim: 3, timings: false }
    }
}

/// `H(Λ)` and `H(Λ^±)` side by side.
#[derive(Debug)]
pub struct PmContext {
    pub base: HallCtx,
    pub pm: HallCtx,
    pub embedding: PmEmbedding,
}

fn dims_label(d: &[u32]) -> String {
    let parts: Vec<String> = d.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

impl PmContext {
    pub fn new(quiver: &ValuedQuiver, q: u32, caps: Caps) -> Result<Self, HallError> {
        let base = HallCtx::from_quiver(quiver, q, caps)?;
        let pm = HallCtx::from_quiver(&pm_quiver(quiver), q, caps)?;
        let embedding = PmEmbedding::new(base.species(), pm.species())?;
        Ok(Self { base, pm, embedding })
    }

    pub fn embed_class(&self, sign: Sign, id: &IsoClassId) -> Result<IsoClassId, HallError> {
        embed_pm(&self.base, &self.pm, &self.embedding, sign, id)
    }

    pub fn embed_elem(&self, sign: Sign, x: &HallElem) -> Result<HallElem, HallError> {
        let mut out = HallElem::zero(x.q());
        for (k, c) in x.terms() {
            out.add_term(self.embed_class(sign, k)?, c.clone());
        }
        Ok(out)
    }

    /// Simples of `Γ` followed by orthogonal bases of `L_ν^⊥` for
    /// non-simple `ν` up to `imaginary_dim`.
    pub fn generators(&self, opts: &VerifyOptions) -> Result<Vec<Generator>, HallError> {
        let s = self.base.species();
        let mut gens = Vec::new();
        for i in 0..s.vertex_count() {
            gens.push(Generator {
                label: s.quiver().vertices()[i].clone(),
                dims: s.unit(i),
                elem: self.base.simple(i)?,
                real: true,
                vertex: Some(i),
            });
        }
        for nu in graded_dims(s, opts.imaginary_dim) {
            if nu.iter().sum::<u32>() == 1 {
                continue;
            }
            for (k, b) in self.base.lperp(&nu, opts.normalization)?.basis.into_iter().enumerate() {
                gens.push(Generator {
                    label: format!("θ{}#{k}", dims_label(&nu)),
                    dims: nu.clone(),
                    elem: b,
                    real: false,
                    vertex: None,
                });
            }
        }
        Ok(gens)
    }

    /// Symmetric Euler form `(i^+, j^-)` on `Γ^±`.
    fn cross_pairing(&self, a: &[u32], b: &[u32]) -> i64 {
        let e = &self.embedding;
        self.pm.species().symmetric_form(&e.embed_dims(Sign::Plus, a), &e.embed_dims(Sign::Minus, b))
    }

    pub fn verify_relations(&self, relations: &[Relation], opts: &VerifyOptions) -> Result<Vec<CheckReport>, HallError> {
        let gens = self.generators(opts)?;
        let mut embedded = BTreeMap::new();
        for (k, g) in gens.iter().enumerate() {
            for sign in [Sign::Plus, Sign::Minus] {
                embedded.insert((k, sign), self.embed_elem(sign, &g.elem)?);
            }
        }
        let sym = |a: &Generator, b: &Generator| self.base.species().symmetric_form(&a.dims, &b.dims);
        let mut out = Vec::new();
        for &rel in relations {
            let mut lines = Vec::new();
            match rel {
                Relation::SerrePlus | Relation::SerreMinus => {
                    let sign = if rel == Relation::SerrePlus { Sign::Plus } else { Sign::Minus };
                    for (i, gi) in gens.iter().enumerate().filter(|(_, g)| g.real) {
                        for (j, gj) in gens.iter().enumerate() {
                            if i == j {
                                continue;
                            }
                            let a = 2 * sym(gi, gj) / sym(gi, gi);
                            let m = (1 - a) as u32;
                            let expr = serre_sum("x", "y", m, self.base.species().d(gi.vertex.unwrap()));
                            let inst = json!({ "i": gi.label, "j": gj.label, "exponent": m });
                            lines.push(self.check_zero(rel, inst, &expr, &embedded[&(i, sign)], &embedded[&(j, sign)], opts)?);
                        }
                    }
                }
                Relation::CommutePlus | Relation::CommuteMinus => {
                    let sign = if rel == Relation::CommutePlus { Sign::Plus } else { Sign::Minus };
                    for i in 0..gens.len() {
                        for j in i + 1..gens.len() {
                            if sym(&gens[i], &gens[j]) != 0 {
                                continue;
                            }
                            let inst = json!({ "i": gens[i].label, "j": gens[j].label });
                            let expr = commutator();
                            lines.push(self.check_zero(rel, inst, &expr, &embedded[&(i, sign)], &embedded[&(j, sign)], opts)?);
                        }
                    }
                }
                Relation::SerreMixed => {
                    for (i, gi) in gens.iter().enumerate().filter(|(_, g)| g.real) {
                        let expr = serre_sum("x", "y", 3, self.base.species().d(gi.vertex.unwrap()));
                        for (x, y, form) in [(Sign::Plus, Sign::Minus, "+-"), (Sign::Minus, Sign::Plus, "-+")] {
                            let inst = json!({ "i": gi.label, "form": form, "exponent": 3 });
                            lines.push(self.check_zero(rel, inst, &expr, &embedded[&(i, x)], &embedded[&(i, y)], opts)?);
                        }
                    }
                }
                Relation::SerreImaginary => {
                    for (i, gi) in gens.iter().enumerate().filter(|(_, g)| g.real) {
                        for (j, gj) in gens.iter().enumerate().filter(|(_, g)| !g.real) {
                            let v = gi.vertex.unwrap();
                            if self.cross_pairing(&gi.dims, &gj.dims) == 0 {
                                continue;
                            }
                            let d = self.base.species().d(v);
                            let b = 4 * d * gj.dims[v];
                            let expr = serre_sum("x", "y", 1 + b, d);
                            for (x, y, form) in [(Sign::Plus, Sign::Minus, "+-"), (Sign::Minus, Sign::Plus, "-+")] {
                                let inst = json!({ "i": gi.label, "j": gj.label, "form": form, "exponent": 1 + b });
                                lines.push(self.check_zero(rel, inst, &expr, &embedded[&(i, x)], &embedded[&(j, y)], opts)?);
                            }
                        }
                    }
                }
                Relation::CommuteMixed => {
                    for i in 0..gens.len() {
                        for j in i..gens.len() {
                            if self.cross_pairing(&gens[i].dims, &gens[j].dims) != 0 {
                                continue;
                            }
                            let expr = commutator();
                            for (x, y, form) in [(Sign::Plus, Sign::Minus, "+-"), (Sign::Minus, Sign::Plus, "-+")] {
                                let inst = json!({ "i": gens[i].label, "j": gens[j].label, "form": form });
                                lines.push(self.check_zero(rel, inst, &expr, &embedded[&(i, x)], &embedded[&(j, y)], opts)?);
                            }
                        }
                    }
                }
            }
            if lines.is_empty() {
                lines.push(CheckReport {
                    relation: rel.name().into(),
                    instance: json!({ "imaginary_search_dim": opts.imaginary_dim }),
                    status: Status::Vacuous,
                    residue_terms: 0,
                    millis: 0,
                });
            }
            out.extend(lines);
        }
        Ok(out)
    }

    fn check_zero(
        &self,
        rel: Relation,
        instance: serde_json::Value,
        expr: &NCExpr,
        x: &HallElem,
        y: &HallElem,
        opts: &VerifyOptions,
    ) -> Result<CheckReport, HallError> {
        let start = Instant::now();
        let binding = BTreeMap::from([("x".to_string(), x.clone()), ("y".to_string(), y.clone())]);
        let residue = self.pm.eval_nc(expr, &binding)?;
        Ok(CheckReport {
            relation: rel.name().into(),
            instance,
            status: if residue.is_zero() { Status::Ok } else { Status::Violated },
            residue_terms: residue.len(),
            millis: if opts.timings { start.elapsed().as_millis() as u64 } else { 0 },
        })
    }

    /// Checks `⟨α,β⟩ = ⟨α^±,β^±⟩` and `g^γ_{αβ} = g^{γ^±}_{α^±β^±}` for all
    /// class pairs whose sum has total `k`-dimension at most `max_k_dim`,
    /// for both signs. One report line per `(sign, α, β)`.
    pub fn verify_embedding(&self, max_k_dim: u32, timings: bool) -> Result<Vec<CheckReport>, HallError> {
        let s = self.base.species();
        let mut dims = vec![vec![0; s.vertex_count()]];
        dims.extend(graded_dims(s, max_k_dim));
        let mut out = Vec::new();
        for sign in [Sign::Plus, Sign::Minus] {
            for da in &dims {
                for db in &dims {
                    let sum: DimVec = da.iter().zip(db).map(|(a, b)| a + b).collect();
                    if s.total_k_dim(&sum) > max_k_dim {
                        continue;
                    }
                    let e = &self.embedding;
                    let euler = s.euler_form(da, db);
                    let euler_pm = self.pm.species().euler_form(&e.embed_dims(sign, da), &e.embed_dims(sign, db));
                    for a in self.base.classes(da)? {
                        for b in self.base.classes(db)? {
                            let start = Instant::now();
                            let base_row = self.base.mul_basis(&a, &b)?;
                            let pm_row = self.pm.mul_basis(&self.embed_class(sign, &a)?, &self.embed_class(sign, &b)?)?;
                            let mapped = self.embed_elem(sign, &base_row)?;
                            let residue = &mapped - &pm_row;
                            let ok = euler == euler_pm && residue.is_zero();
                            out.push(CheckReport {
                                relation: "embedding".into(),
                                instance: json!({
                                    "sign": sign.symbol(),
                                    "alpha": a.to_hex(),
                                    "beta": b.to_hex(),
                                    "euler": euler,
                                    "euler_pm": euler_pm,
                                    "terms": base_row.len(),
                                }),
                                status: if ok { Status::Ok } else { Status::Violated },
                                residue_terms: residue.len(),
                                millis: if timings { start.elapsed().as_millis() as u64 } else { 0 },
                            });
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `x y − y x`.
fn commutator() -> NCExpr {
    &NCExpr::word(&["x", "y"]) - &NCExpr::word(&["y", "x"])
}
