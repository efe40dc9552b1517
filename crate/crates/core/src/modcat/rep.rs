//! Representations of a species and their isomorphism-class identifiers.

use std::cmp::Ordering;
use std::fmt;

use super::linalg::Mat;
use super::species::SpeciesSpec;
use super::ModError;

/// Per-vertex dimension over the vertex field.
pub type DimVec = Vec<u32>;

/// A representation: `V_i = k_i^{n_i}` (seen as `k^{n_i d_i}` with the
/// block-repeated action of `x`) and, per arrow and bimodule copy, a
/// `k`-matrix `V_src -> V_tgt` linear over the smaller endpoint field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuiverRep {
    dims: DimVec,
    maps: Vec<Vec<Mat>>,
}

impl QuiverRep {
    /// Checked constructor.
    pub fn new(s: &SpeciesSpec, dims: DimVec, maps: Vec<Vec<Mat>>) -> Result<Self, ModError> {
        if dims.len() != s.vertex_count() || maps.len() != s.arrows().len() {
            return Err(ModError::InvalidRep("shape does not match the species".into()));
        }
        let f = s.base();
        for (h, (a, copies)) in s.arrows().iter().zip(&maps).enumerate() {
            if copies.len() != a.copies as usize {
                return Err(ModError::InvalidRep(format!("arrow {h} needs {} maps", a.copies)));
            }
            let rows = (dims[a.tgt] * s.d(a.tgt)) as usize;
            let cols = (dims[a.src] * s.d(a.src)) as usize;
            for m in copies {
                if m.rows() != rows || m.cols() != cols {
                    return Err(ModError::InvalidRep(format!("arrow {h} map has wrong size")));
                }
                if let (Some(gs), Some(gt)) = (&a.src_gen, &a.tgt_gen) {
                    let x = gs.block_diag(dims[a.src] as usize);
                    let y = gt.block_diag(dims[a.tgt] as usize);
                    if m.mul(f, &x) != y.mul(f, m) {
                        return Err(ModError::InvalidRep(format!("arrow {h} map is not linear over the small field")));
                    }
                }
            }
        }
        Ok(Self { dims, maps })
    }

    pub(crate) fn new_unchecked(dims: DimVec, maps: Vec<Vec<Mat>>) -> Self {
        Self { dims, maps }
    }

    pub fn zero(s: &SpeciesSpec) -> Self {
        let dims = vec![0; s.vertex_count()];
        let maps = s.arrows().iter().map(|a| vec![Mat::zeros(0, 0); a.copies as usize]).collect();
        Self { dims, maps }
    }

    /// The simple representation at vertex `i`.
    pub fn simple(s: &SpeciesSpec, i: usize) -> Self {
        Self::zero_maps(s, s.unit(i))
    }

    /// All arrow maps zero (semisimple).
    pub fn zero_maps(s: &SpeciesSpec, dims: DimVec) -> Self {
        let maps = s
            .arrows()
            .iter()
            .map(|a| {
                let rows = (dims[a.tgt] * s.d(a.tgt)) as usize;
                let cols = (dims[a.src] * s.d(a.src)) as usize;
                vec![Mat::zeros(rows, cols); a.copies as usize]
            })
            .collect();
        Self { dims, maps }
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn maps(&self) -> &[Vec<Mat>] {
        &self.maps
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&n| n == 0)
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, s: &SpeciesSpec, other: &QuiverRep) -> QuiverRep {
        let dims: DimVec = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = s
            .arrows()
            .iter()
            .enumerate()
            .map(|(h, a)| {
                (0..a.copies as usize)
                    .map(|c| {
                        let (x, y) = (&self.maps[h][c], &other.maps[h][c]);
                        let mut m = Mat::zeros(x.rows() + y.rows(), x.cols() + y.cols());
                        for i in 0..x.rows() {
                            for j in 0..x.cols() {
                                m.set(i, j, x.get(i, j));
                            }
                        }
                        for i in 0..y.rows() {
                            for j in 0..y.cols() {
                                m.set(x.rows() + i, x.cols() + j, y.get(i, j));
                            }
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        QuiverRep { dims, maps }
    }

    /// All arrow-matrix entries in arrow, copy, row-major order.
    pub fn entries(&self) -> Vec<u16> {
        self.maps.iter().flatten().flat_map(|m| m.data().iter().copied()).collect()
    }
}

/// Stable identifier of an isomorphism class: the dimension vector plus the
/// byte serialization of the lexicographically smallest arrow-matrix tuple
/// in the orbit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IsoClassId {
    dims: DimVec,
    canonical: Vec<u8>,
}

/// Serializes arrow entries: one byte per entry for `q <= 256`, else two
/// big-endian bytes.
pub fn serialize_entries(entries: &[u16], q: u32) -> Vec<u8> {
    if q <= 256 {
        entries.iter().map(|&x| x as u8).collect()
    } else {
        entries.iter().flat_map(|&x| x.to_be_bytes()).collect()
    }
}

impl IsoClassId {
    pub fn new(dims: DimVec, canonical: Vec<u8>) -> Self {
        Self { dims, canonical }
    }

    pub fn zero(vertex_count: usize) -> Self {
        Self { dims: vec![0; vertex_count], canonical: vec![] }
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn canonical(&self) -> &[u8] {
        &self.canonical
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&n| n == 0)
    }

    /// Hex of `[vertex count, dims..., canonical bytes...]`.
    pub fn to_hex(&self) -> String {
        let mut bytes = vec![self.dims.len() as u8];
        bytes.extend(self.dims.iter().map(|&d| d as u8));
        bytes.extend_from_slice(&self.canonical);
        hex::encode(bytes)
    }

    pub fn from_hex(s: &str) -> Result<Self, ModError> {
        let bytes = hex::decode(s.trim()).map_err(|e| ModError::Parse(format!("bad class id {s:?}: {e}")))?;
        let n = *bytes.first().ok_or_else(|| ModError::Parse("empty class id".into()))? as usize;
        if bytes.len() < 1 + n {
            return Err(ModError::Parse(format!("truncated class id {s:?}")));
        }
        Ok(Self { dims: bytes[1..1 + n].iter().map(|&d| d as u32).collect(), canonical: bytes[1 + n..].to_vec() })
    }
}

impl Ord for IsoClassId {
    fn cmp(&self, other: &Self) -> Ordering {
        let total = |x: &Self| x.dims.iter().sum::<u32>();
        total(self)
            .cmp(&total(other))
            .then_with(|| self.dims.cmp(&other.dims))
            .then_with(|| self.canonical.cmp(&other.canonical))
    }
}

impl PartialOrd for IsoClassId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IsoClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_hex())
    }
}
