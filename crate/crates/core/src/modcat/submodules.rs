//! Subrepresentations and the induced sub and quotient representations.

use super::field::FiniteField;
use super::linalg::Mat;
use super::rep::{DimVec, QuiverRep};
use super::species::{SpeciesSpec, VertexField};

/// A subspace of `F^n` in reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    pub rows: Vec<Vec<u16>>,
    pub pivots: Vec<usize>,
}

impl Subspace {
    /// Subtracts the row combination that clears the pivot entries; the
    /// result is zero exactly when `w` lies in the subspace.
    pub fn reduce(&self, f: &FiniteField, w: &mut [u16]) {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = w[pc];
            if c != 0 {
                for (x, &r) in w.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
    }
}

fn combinations(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, m, &mut Vec::new(), &mut out);
    out
}

/// Every `m`-dimensional subspace of `F^n`, each exactly once.
pub fn subspaces(f: &FiniteField, n: usize, m: usize) -> Vec<Subspace> {
    let q = f.order() as u64;
    let mut out = Vec::new();
    for pivots in combinations(n, m) {
        // free slots: (row, col) with col > pivot(row), col not a pivot
        let slots: Vec<(usize, usize)> = (0..m)
            .flat_map(|r| ((pivots[r] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        for mut idx in 0..q.pow(slots.len() as u32) {
            let mut rows = vec![vec![0u16; n]; m];
            for (r, &pc) in pivots.iter().enumerate() {
                rows[r][pc] = 1;
            }
            for &(r, c) in &slots {
                rows[r][c] = (idx % q) as u16;
                idx /= q;
            }
            out.push(Subspace { rows, pivots: pivots.clone() });
        }
    }
    out
}

/// A subrepresentation with its sub and quotient representations written in
/// the induced bases.
#[derive(Debug, Clone)]
pub struct Submodule {
    pub dims: DimVec,
    pub spaces: Vec<Subspace>,
    pub sub: QuiverRep,
    pub quotient: QuiverRep,
}

/// `k`-basis `x^r b_u` (index `u d + r`) of a `k_i`-subspace, in base
/// coordinates.
fn base_basis(vf: &VertexField, sp: &Subspace) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    for row in &sp.rows {
        for r in 0..vf.d {
            out.push(vf.to_base(&vf.scale(vf.basis_element(r), row)));
        }
    }
    out
}

/// `k`-basis `x^r e_c` over the non-pivot columns `c`.
fn complement_basis(vf: &VertexField, n: usize, sp: &Subspace) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    for c in (0..n).filter(|c| !sp.pivots.contains(c)) {
        for r in 0..vf.d {
            let mut e = vec![0u16; n];
            e[c] = vf.basis_element(r);
            out.push(vf.to_base(&e));
        }
    }
    out
}

fn is_closed(s: &SpeciesSpec, rep: &QuiverRep, spaces: &[Option<Subspace>], h: usize) -> bool {
    let a = &s.arrows()[h];
    let (Some(us), Some(ut)) = (&spaces[a.src], &spaces[a.tgt]) else { return true };
    let (vs, vt) = (s.vertex(a.src), s.vertex(a.tgt));
    let basis = base_basis(vs, us);
    rep.maps()[h].iter().all(|am| {
        basis.iter().all(|b| {
            let mut w = vt.from_base(&am.mul_vec(s.base(), b));
            ut.reduce(&vt.field, &mut w);
            w.iter().all(|&x| x == 0)
        })
    })
}

fn induced(s: &SpeciesSpec, rep: &QuiverRep, spaces: Vec<Subspace>) -> Submodule {
    let f = s.base();
    let nv = s.vertex_count();
    let dims: DimVec = spaces.iter().map(|sp| sp.rows.len() as u32).collect();
    let qdims: DimVec = (0..nv).map(|v| rep.dims()[v] - dims[v]).collect();
    let mut sub_maps = Vec::new();
    let mut quot_maps = Vec::new();
    for (h, a) in s.arrows().iter().enumerate() {
        let (vs, vt) = (s.vertex(a.src), s.vertex(a.tgt));
        let (us, ut) = (&spaces[a.src], &spaces[a.tgt]);
        let n_s = rep.dims()[a.src] as usize;
        let n_t = rep.dims()[a.tgt] as usize;
        let sub_basis = base_basis(vs, us);
        let comp_basis = complement_basis(vs, n_s, us);
        let t_free: Vec<usize> = (0..n_t).filter(|c| !ut.pivots.contains(c)).collect();
        let mut subs = Vec::new();
        let mut quots = Vec::new();
        for am in &rep.maps()[h] {
            let rows = (dims[a.tgt] * vt.d) as usize;
            let mut sm = Mat::zeros(rows, sub_basis.len());
            for (col, b) in sub_basis.iter().enumerate() {
                let w = vt.from_base(&am.mul_vec(f, b));
                // coefficients at pivots express w in the subspace basis
                let lam: Vec<u16> = ut.pivots.iter().map(|&pc| w[pc]).collect();
                for (row, x) in vt.to_base(&lam).into_iter().enumerate() {
                    sm.set(row, col, x);
                }
            }
            subs.push(sm);
            let qrows = (qdims[a.tgt] * vt.d) as usize;
            let mut qm = Mat::zeros(qrows, comp_basis.len());
            for (col, b) in comp_basis.iter().enumerate() {
                let mut w = vt.from_base(&am.mul_vec(f, b));
                ut.reduce(&vt.field, &mut w);
                let lam: Vec<u16> = t_free.iter().map(|&c| w[c]).collect();
                for (row, x) in vt.to_base(&lam).into_iter().enumerate() {
                    qm.set(row, col, x);
                }
            }
            quots.push(qm);
        }
        sub_maps.push(subs);
        quot_maps.push(quots);
    }
    Submodule {
        sub: QuiverRep::new_unchecked(dims.clone(), sub_maps),
        quotient: QuiverRep::new_unchecked(qdims, quot_maps),
        dims,
        spaces,
    }
}

/// Subrepresentations of `rep` with `k_i`-dimension vector `sub_dims`.
pub fn submodules_with_dims(s: &SpeciesSpec, rep: &QuiverRep, sub_dims: &[u32]) -> Vec<Submodule> {
    let nv = s.vertex_count();
    if (0..nv).any(|v| sub_dims[v] > rep.dims()[v]) {
        return Vec::new();
    }
    let choices: Vec<Vec<Subspace>> = (0..nv)
        .map(|v| subspaces(&s.vertex(v).field, rep.dims()[v] as usize, sub_dims[v] as usize))
        .collect();
    // arrows become checkable once both endpoints are chosen
    let ready_at: Vec<Vec<usize>> = (0..nv)
        .map(|v| {
            (0..s.arrows().len())
                .filter(|&h| {
                    let a = &s.arrows()[h];
                    a.src.max(a.tgt) == v
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<Option<Subspace>> = vec![None; nv];
    fn go(
        v: usize,
        s: &SpeciesSpec,
        rep: &QuiverRep,
        choices: &[Vec<Subspace>],
        ready_at: &[Vec<usize>],
        chosen: &mut Vec<Option<Subspace>>,
        out: &mut Vec<Submodule>,
    ) {
        if v == choices.len() {
            let spaces = chosen.iter().map(|c| c.clone().unwrap()).collect();
            out.push(induced(s, rep, spaces));
            return;
        }
        for sp in &choices[v] {
            chosen[v] = Some(sp.clone());
            if ready_at[v].iter().all(|&h| is_closed(s, rep, chosen, h)) {
                go(v + 1, s, rep, choices, ready_at, chosen, out);
            }
        }
        chosen[v] = None;
    }
    go(0, s, rep, &choices, &ready_at, &mut chosen, &mut out);
    out
}

/// Every subrepresentation of `rep`, grouped by dimension vector in
/// lexicographic order.
pub fn all_submodules(s: &SpeciesSpec, rep: &QuiverRep) -> Vec<Submodule> {
    let mut dims_list: Vec<DimVec> = vec![vec![]];
    for &n in rep.dims() {
        dims_list = dims_list.into_iter().flat_map(|d| (0..=n).map(move |k| [d.clone(), vec![k]].concat())).collect();
    }
    dims_list.iter().flat_map(|d| submodules_with_dims(s, rep, d)).collect()
}
