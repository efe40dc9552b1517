//! Species over `F_q` realizing a valued quiver.

use super::field::{eval_poly_in_extension, irreducible_of_degree, FiniteField};
use super::linalg::Mat;
use super::ModError;
use crate::cartan::ValuedQuiver;

/// The field `k_i = F_{q^{d_i}}` at a vertex, presented over `k = F_q`.
#[derive(Debug, Clone)]
pub struct VertexField {
    pub d: u32,
    /// `k_i`, built as `k[x]/(modulus)` (equal to `k` when `d = 1`).
    pub field: FiniteField,
    /// Monic irreducible of degree `d` over `k`, constant term first.
    pub modulus: Vec<u16>,
    /// Matrix over `k` of multiplication by `x` on `k_i = k^d`.
    pub x_action: Mat,
}

impl VertexField {
    /// `d×d` matrix over `k` of multiplication by `r ∈ k_i`.
    pub fn mult_matrix(&self, r: u16) -> Mat {
        let d = self.d as usize;
        if d == 1 {
            return Mat::from_rows(1, 1, vec![r]);
        }
        let x = self.field.adjoined_root();
        let mut m = Mat::zeros(d, d);
        for t in 0..d {
            let img = self.field.mul(r, self.field.pow(x, t as u64));
            for (row, c) in self.field.coords(img).into_iter().enumerate() {
                m.set(row, t, c);
            }
        }
        m
    }

    /// Coordinates over `k` of a vector over `k_i`.
    pub fn to_base(&self, v: &[u16]) -> Vec<u16> {
        if self.d == 1 {
            return v.to_vec();
        }
        v.iter().flat_map(|&a| self.field.coords(a)).collect()
    }

    /// Inverse of [`VertexField::to_base`].
    pub fn from_base(&self, v: &[u16]) -> Vec<u16> {
        if self.d == 1 {
            return v.to_vec();
        }
        v.chunks(self.d as usize).map(|c| self.field.from_coords(c)).collect()
    }

    /// `r · v` for `r ∈ k_i` and `v` over `k_i`.
    pub fn scale(&self, r: u16, v: &[u16]) -> Vec<u16> {
        v.iter().map(|&a| self.field.mul(r, a)).collect()
    }

    /// `x^t` in `k_i`, the `t`-th element of the power basis over `k`.
    pub fn basis_element(&self, t: u32) -> u16 {
        self.field.pow(self.field.adjoined_root(), t as u64)
    }
}

/// Arrow bimodule `c` copies of `F_{q^L}` with `L = max(d_s, d_t)`.
///
/// By adjunction a representation of the arrow is `c` maps `V_s -> V_t`
/// linear over the smaller of the two endpoint fields.
#[derive(Debug, Clone)]
pub struct ArrowBimodule {
    pub src: usize,
    pub tgt: usize,
    pub copies: u32,
    pub composite_degree: u32,
    /// Endpoint whose field is the smaller one.
    pub small: usize,
    /// Action of the generator of the smaller field on `k_src`, `k_tgt`
    /// (`None` when the smaller field is `k` itself).
    pub src_gen: Option<Mat>,
    pub tgt_gen: Option<Mat>,
}

impl ArrowBimodule {
    /// `dim_k` of the bimodule.
    pub fn dim_k(&self) -> u32 {
        self.copies * self.composite_degree
    }
}

#[derive(Debug, Clone)]
pub struct SpeciesSpec {
    quiver: ValuedQuiver,
    base: FiniteField,
    vertices: Vec<VertexField>,
    arrows: Vec<ArrowBimodule>,
}

fn vertex_field(base: &FiniteField, d: u32) -> Result<VertexField, ModError> {
    let miss = || ModError::FieldTableMiss { p: base.characteristic(), e: d };
    if d == 1 {
        return Ok(VertexField { d, field: base.clone(), modulus: vec![0, 1], x_action: Mat::identity(1) });
    }
    let modulus = irreducible_of_degree(base, d).ok_or_else(miss)?;
    let field = FiniteField::extension(base, &modulus).ok_or_else(miss)?;
    let mut v = VertexField { d, field, modulus, x_action: Mat::identity(1) };
    v.x_action = v.mult_matrix(v.field.adjoined_root());
    Ok(v)
}

/// Smallest root in `big` of the modulus of `small` (both over `k`).
fn embedding_generator(small: &VertexField, big: &VertexField) -> Mat {
    let eval = eval_poly_in_extension(&big.field, &small.modulus);
    let root = big.field.elements().find(|&r| eval(r) == 0).expect("subfield modulus splits in the extension");
    big.mult_matrix(root)
}

/// Builds the species with `k_i = F_{q^{d_i}}` from the quiver's symmetrizer.
pub fn species_from_quiver(quiver: &ValuedQuiver, field_order: u32) -> Result<SpeciesSpec, ModError> {
    if !quiver.is_acyclic() {
        return Err(ModError::CyclicQuiver);
    }
    let base = FiniteField::new(field_order)?;
    let g = quiver.graph();
    let vertices = g.d_vertex().iter().map(|&d| vertex_field(&base, d)).collect::<Result<Vec<_>, _>>()?;
    let mut arrows = Vec::new();
    for &(s, t) in quiver.arrows() {
        let (ds, dt) = (g.d(s), g.d(t));
        let dst = g.d_edge(s, t);
        let unsupported = || ModError::UnsupportedValuation {
            src: g.vertices()[s].clone(),
            tgt: g.vertices()[t].clone(),
            d_st: dst,
            d_ts: g.d_edge(t, s),
        };
        if ds % dt != 0 && dt % ds != 0 {
            return Err(unsupported());
        }
        let l = ds.max(dt);
        if !(ds * dst).is_multiple_of(l) {
            return Err(unsupported());
        }
        let copies = ds * dst / l;
        let small = if ds <= dt { s } else { t };
        let sv = &vertices[small];
        let gen_on = |v: usize| -> Option<Mat> {
            if sv.d == 1 {
                None
            } else if vertices[v].d == sv.d {
                Some(vertices[v].x_action.clone())
            } else {
                Some(embedding_generator(sv, &vertices[v]))
            }
        };
        arrows.push(ArrowBimodule { src: s, tgt: t, copies, composite_degree: l, small, src_gen: gen_on(s), tgt_gen: gen_on(t) });
    }
    Ok(SpeciesSpec { quiver: quiver.clone(), base, vertices, arrows })
}

impl SpeciesSpec {
    pub fn quiver(&self) -> &ValuedQuiver {
        &self.quiver
    }

    pub fn q(&self) -> u32 {
        self.base.order()
    }

    pub fn base(&self) -> &FiniteField {
        &self.base
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, i: usize) -> &VertexField {
        &self.vertices[i]
    }

    pub fn vertices(&self) -> &[VertexField] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[ArrowBimodule] {
        &self.arrows
    }

    pub fn d(&self, i: usize) -> u32 {
        self.vertices[i].d
    }

    /// `Σ_i n_i d_i`.
    pub fn total_k_dim(&self, dims: &[u32]) -> u32 {
        dims.iter().zip(&self.vertices).map(|(n, v)| n * v.d).sum()
    }

    /// `dim_k` of the tensor algebra: one term per path, a path through
    /// interior vertices `j` contributing `Π dim_k M_h / Π d_j`.
    pub fn tensor_algebra_dim(&self) -> u64 {
        let n = self.vertices.len();
        // topological order by repeated relaxation (quiver is acyclic)
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.tgt] += 1;
        }
        let mut order = Vec::with_capacity(n);
        let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        while let Some(v) = ready.pop() {
            order.push(v);
            for a in self.arrows.iter().filter(|a| a.src == v) {
                indeg[a.tgt] -= 1;
                if indeg[a.tgt] == 0 {
                    ready.push(a.tgt);
                }
            }
        }
        // ending[v] = Σ over paths of length >= 1 ending at v
        let mut ending = vec![0u64; n];
        for &v in &order {
            for a in self.arrows.iter().filter(|a| a.src == v) {
                let dv = self.vertices[v].d as u64;
                ending[a.tgt] += (dv + ending[v]) * a.dim_k() as u64 / dv;
            }
        }
        self.vertices.iter().map(|v| v.d as u64).sum::<u64>() + ending.iter().sum::<u64>()
    }

    /// `⟨a, b⟩ = Σ a_i b_i d_i - Σ_{h: i -> j} a_i b_j dim_k M_h`.
    pub fn euler_form(&self, a: &[u32], b: &[u32]) -> i64 {
        let diag: i64 = (0..self.vertices.len()).map(|i| (a[i] * b[i] * self.vertices[i].d) as i64).sum();
        let off: i64 = self.arrows.iter().map(|h| (a[h.src] * b[h.tgt] * h.dim_k()) as i64).sum();
        diag - off
    }

    /// `(a, b) = ⟨a, b⟩ + ⟨b, a⟩`.
    pub fn symmetric_form(&self, a: &[u32], b: &[u32]) -> i64 {
        self.euler_form(a, b) + self.euler_form(b, a)
    }

    /// Unit dimension vector at `i`.
    pub fn unit(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.vertices.len()];
        v[i] = 1;
        v
    }

    /// `2(i,j)/(i,i)` over the simple dimension vectors.
    pub fn cartan_from_euler(&self) -> Vec<Vec<i64>> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let ii = self.symmetric_form(&self.unit(i), &self.unit(i));
                (0..n).map(|j| 2 * self.symmetric_form(&self.unit(i), &self.unit(j)) / ii).collect()
            })
            .collect()
    }
}
