//! Isomorphism classes of representations with a fixed dimension vector, by
//! orbit enumeration of the arrow-matrix tuples under `Π GL_{n_i}(k_i)`.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::One;

use super::linalg::Mat;
use super::rep::{serialize_entries, DimVec, IsoClassId, QuiverRep};
use super::species::SpeciesSpec;
use super::{Caps, ModError};

#[derive(Debug, Clone)]
pub struct ClassEntry {
    pub id: IsoClassId,
    /// Canonical representative (the lexicographically smallest tuple).
    pub rep: QuiverRep,
    pub orbit_size: u64,
    pub aut_order: BigUint,
}

/// All classes of one dimension vector plus a point-to-class index.
#[derive(Debug, Clone)]
pub struct ClassTable {
    dims: DimVec,
    free_cols: Vec<usize>,
    point_class: Vec<u32>,
    classes: Vec<ClassEntry>,
    group_order: BigUint,
    points: u64,
}

/// `|GL_n(F_Q)| = Π_{i<n} (Q^n - Q^i)`.
pub fn gl_order(n: u32, big_q: u64) -> BigUint {
    let qn = BigUint::from(big_q).pow(n);
    (0..n).fold(BigUint::one(), |acc, i| acc * (&qn - BigUint::from(big_q).pow(i)))
}

/// Position and size of each arrow-copy matrix inside the flat variable
/// vector.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    /// `(arrow, offset, rows, cols)` per arrow copy, in arrow-major order.
    pub blocks: Vec<(usize, usize, usize, usize)>,
    pub len: usize,
}

impl Layout {
    pub fn new(s: &SpeciesSpec, dims: &[u32]) -> Self {
        let mut blocks = Vec::new();
        let mut off = 0;
        for (h, a) in s.arrows().iter().enumerate() {
            let rows = (dims[a.tgt] * s.d(a.tgt)) as usize;
            let cols = (dims[a.src] * s.d(a.src)) as usize;
            for _ in 0..a.copies {
                blocks.push((h, off, rows, cols));
                off += rows * cols;
            }
        }
        Self { blocks, len: off }
    }

    pub fn split(&self, s: &SpeciesSpec, dims: &[u32], v: &[u16]) -> QuiverRep {
        let mut maps: Vec<Vec<Mat>> = s.arrows().iter().map(|_| Vec::new()).collect();
        for &(h, off, r, c) in &self.blocks {
            maps[h].push(Mat::from_rows(r, c, v[off..off + r * c].to_vec()));
        }
        QuiverRep::new_unchecked(dims.to_vec(), maps)
    }
}

/// Linear constraints (one row per equation) cutting out the tuples linear
/// over the smaller endpoint field of each arrow.
fn constraint_matrix(s: &SpeciesSpec, dims: &[u32], layout: &Layout) -> Mat {
    let f = s.base();
    let mut rows: Vec<Vec<u16>> = Vec::new();
    for &(h, off, r, c) in &layout.blocks {
        let a = &s.arrows()[h];
        let (Some(gs), Some(gt)) = (&a.src_gen, &a.tgt_gen) else { continue };
        let x = gs.block_diag(dims[a.src] as usize);
        let y = gt.block_diag(dims[a.tgt] as usize);
        // (A X - Y A)[i][j] = Σ_k A[i][k] X[k][j] - Σ_k Y[i][k] A[k][j]
        for i in 0..r {
            for j in 0..c {
                let mut row = vec![0u16; layout.len];
                for k in 0..c {
                    let idx = off + i * c + k;
                    row[idx] = f.add(row[idx], x.get(k, j));
                }
                for k in 0..r {
                    let idx = off + k * c + j;
                    row[idx] = f.sub(row[idx], y.get(i, k));
                }
                if row.iter().any(|&e| e != 0) {
                    rows.push(row);
                }
            }
        }
    }
    let n = rows.len();
    Mat::from_rows(n, layout.len, rows.concat())
}

/// Generators of `GL_n(k_i)` written as `k`-matrices of size `n d_i`.
fn gl_generators(s: &SpeciesSpec, v: usize, n: usize) -> Vec<Mat> {
    let vf = s.vertex(v);
    let d = vf.d as usize;
    let ident = Mat::identity(d);
    let place = |m: &mut Mat, bi: usize, bj: usize, blk: &Mat| {
        for i in 0..d {
            for j in 0..d {
                m.set(bi * d + i, bj * d + j, blk.get(i, j));
            }
        }
    };
    let mut gens = Vec::new();
    let mut diag = Mat::identity(n * d);
    place(&mut diag, 0, 0, &vf.mult_matrix(vf.field.primitive()));
    gens.push(diag);
    if n >= 2 {
        let mut swap = Mat::zeros(n * d, n * d);
        for b in 0..n {
            let to = match b {
                0 => 1,
                1 => 0,
                _ => b,
            };
            place(&mut swap, to, b, &ident);
        }
        gens.push(swap);
        let mut cycle = Mat::zeros(n * d, n * d);
        for b in 0..n {
            place(&mut cycle, (b + 1) % n, b, &ident);
        }
        gens.push(cycle);
        let mut elem = Mat::identity(n * d);
        place(&mut elem, 0, 1, &ident);
        gens.push(elem);
    }
    gens
}

fn flatten(rep: &QuiverRep) -> Vec<u16> {
    rep.entries()
}

impl ClassTable {
    pub fn build(s: &SpeciesSpec, dims: &[u32], caps: &Caps) -> Result<Self, ModError> {
        if dims.len() != s.vertex_count() {
            return Err(ModError::DimMismatch(format!("dimension vector has {} entries", dims.len())));
        }
        let total = s.total_k_dim(dims);
        if total > caps.enum_dim {
            return Err(ModError::CapExceeded { what: "total k-dimension".into(), size: total as u64, cap: caps.enum_dim as u64 });
        }
        let f = s.base();
        let q = f.order() as u64;
        let layout = Layout::new(s, dims);
        let (basis, free_cols) = constraint_matrix(s, dims, &layout).nullspace(f);
        let w = basis.len();
        let points = q.checked_pow(w as u32).filter(|&p| p <= caps.max_points).ok_or(ModError::CapExceeded {
            what: "arrow tuples".into(),
            size: q.saturating_pow(w as u32),
            cap: caps.max_points,
        })?;

        // group generators as w×w matrices on free-column coordinates
        let mut actions: Vec<Mat> = Vec::new();
        for v in 0..s.vertex_count() {
            let n = dims[v] as usize;
            if n == 0 {
                continue;
            }
            for g in gl_generators(s, v, n) {
                let gi = g.inverse(f).expect("generator is invertible");
                let mut m = Mat::zeros(w, w);
                for (u, b) in basis.iter().enumerate() {
                    let rep = layout.split(s, dims, b);
                    let moved: Vec<Vec<Mat>> = s
                        .arrows()
                        .iter()
                        .zip(rep.maps())
                        .map(|(a, copies)| {
                            copies
                                .iter()
                                .map(|x| {
                                    let mut y = x.clone();
                                    if a.tgt == v {
                                        y = g.mul(f, &y);
                                    }
                                    if a.src == v {
                                        y = y.mul(f, &gi);
                                    }
                                    y
                                })
                                .collect()
                        })
                        .collect();
                    let flat = flatten(&QuiverRep::new_unchecked(dims.to_vec(), moved));
                    for (t, &fc) in free_cols.iter().enumerate() {
                        m.set(t, u, flat[fc]);
                    }
                }
                if m != Mat::identity(w) {
                    actions.push(m);
                }
            }
        }

        let decode = |mut idx: u64| -> Vec<u16> {
            (0..w)
                .map(|_| {
                    let d = (idx % q) as u16;
                    idx /= q;
                    d
                })
                .collect()
        };
        let encode = |x: &[u16]| -> u64 { x.iter().rev().fold(0u64, |acc, &d| acc * q + d as u64) };
        let expand = |x: &[u16]| -> Vec<u16> {
            let mut v = vec![0u16; layout.len];
            for (u, &c) in x.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (k, &b) in basis[u].iter().enumerate() {
                    if b != 0 {
                        v[k] = f.add(v[k], f.mul(c, b));
                    }
                }
            }
            v
        };

        let group_order = (0..s.vertex_count())
            .map(|v| gl_order(dims[v], q.pow(s.d(v))))
            .fold(BigUint::one(), |acc, x| acc * x);

        let mut point_class = vec![u32::MAX; points as usize];
        let mut found: Vec<(Vec<u16>, u64)> = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..points {
            if point_class[start as usize] != u32::MAX {
                continue;
            }
            let cls = found.len() as u32;
            point_class[start as usize] = cls;
            queue.push_back(start);
            let mut best: Option<Vec<u16>> = None;
            let mut size = 0u64;
            while let Some(p) = queue.pop_front() {
                size += 1;
                let x = decode(p);
                let full = expand(&x);
                if best.as_ref().is_none_or(|b| full < *b) {
                    best = Some(full);
                }
                for m in &actions {
                    let y = encode(&m.mul_vec(f, &x));
                    if point_class[y as usize] == u32::MAX {
                        point_class[y as usize] = cls;
                        queue.push_back(y);
                    }
                }
            }
            found.push((best.unwrap(), size));
        }

        let mut classes: Vec<(ClassEntry, u32)> = found
            .into_iter()
            .enumerate()
            .map(|(i, (entries, size))| {
                let id = IsoClassId::new(dims.to_vec(), serialize_entries(&entries, q as u32));
                let rep = layout.split(s, dims, &entries);
                let aut_order = &group_order / BigUint::from(size);
                (ClassEntry { id, rep, orbit_size: size, aut_order }, i as u32)
            })
            .collect();
        classes.sort_by(|a, b| a.0.id.cmp(&b.0.id));
        let mut remap = vec![0u32; classes.len()];
        for (new, (_, old)) in classes.iter().enumerate() {
            remap[*old as usize] = new as u32;
        }
        for c in point_class.iter_mut() {
            *c = remap[*c as usize];
        }
        Ok(Self {
            dims: dims.to_vec(),
            free_cols,
            point_class,
            classes: classes.into_iter().map(|(c, _)| c).collect(),
            group_order,
            points,
        })
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn classes(&self) -> &[ClassEntry] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Number of arrow tuples satisfying the linearity constraints.
    pub fn point_count(&self) -> u64 {
        self.points
    }

    pub fn group_order(&self) -> &BigUint {
        &self.group_order
    }

    /// Index of the class of `rep` (which must have this table's dims).
    pub fn index_of(&self, q: u32, rep: &QuiverRep) -> usize {
        debug_assert_eq!(rep.dims(), self.dims.as_slice());
        let flat = rep.entries();
        let idx = self.free_cols.iter().rev().fold(0u64, |acc, &c| acc * q as u64 + flat[c] as u64);
        self.point_class[idx as usize] as usize
    }

    pub fn position(&self, id: &IsoClassId) -> Option<usize> {
        self.classes.binary_search_by(|c| c.id.cmp(id)).ok()
    }
}
