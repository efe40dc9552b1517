//! Hom spaces between representations, by solving the intertwining system
//! over `k`.

use super::linalg::Mat;
use super::rep::QuiverRep;
use super::species::SpeciesSpec;

/// `dim_k Hom(m, n)`.
pub fn hom_dim(s: &SpeciesSpec, m: &QuiverRep, n: &QuiverRep) -> u32 {
    let f = s.base();
    let nv = s.vertex_count();
    // unknown f_v is (n_v d_v) × (m_v d_v), row-major, concatenated over v
    let mut offs = Vec::with_capacity(nv);
    let mut shape = Vec::with_capacity(nv);
    let mut total = 0usize;
    for v in 0..nv {
        let d = s.d(v);
        let (r, c) = ((n.dims()[v] * d) as usize, (m.dims()[v] * d) as usize);
        offs.push(total);
        shape.push((r, c));
        total += r * c;
    }
    if total == 0 {
        return 0;
    }
    let mut rows: Vec<Vec<u16>> = Vec::new();
    let mut push = |row: Vec<u16>| {
        if row.iter().any(|&e| e != 0) {
            rows.push(row);
        }
    };
    // f_v commutes with the action of x
    for v in 0..nv {
        let vf = s.vertex(v);
        let (r, c) = shape[v];
        if vf.d == 1 || r * c == 0 {
            continue;
        }
        let xm = vf.x_action.block_diag(m.dims()[v] as usize);
        let xn = vf.x_action.block_diag(n.dims()[v] as usize);
        for i in 0..r {
            for j in 0..c {
                let mut row = vec![0u16; total];
                for k in 0..c {
                    let idx = offs[v] + i * c + k;
                    row[idx] = f.add(row[idx], xm.get(k, j));
                }
                for k in 0..r {
                    let idx = offs[v] + k * c + j;
                    row[idx] = f.sub(row[idx], xn.get(i, k));
                }
                push(row);
            }
        }
    }
    // f_t A^m = A^n f_s for every arrow copy
    for (h, a) in s.arrows().iter().enumerate() {
        let (rt, ct) = shape[a.tgt];
        let (rs, cs) = shape[a.src];
        for copy in 0..a.copies as usize {
            let am: &Mat = &m.maps()[h][copy];
            let an: &Mat = &n.maps()[h][copy];
            // entry (i, j) with i < rt (= n_t d_t), j < cs (= m_s d_s)
            for i in 0..rt {
                for j in 0..cs {
                    let mut row = vec![0u16; total];
                    for k in 0..ct {
                        let idx = offs[a.tgt] + i * ct + k;
                        row[idx] = f.add(row[idx], am.get(k, j));
                    }
                    for k in 0..rs {
                        let idx = offs[a.src] + k * cs + j;
                        row[idx] = f.sub(row[idx], an.get(i, k));
                    }
                    push(row);
                }
            }
        }
    }
    let n_rows = rows.len();
    let rank = if n_rows == 0 { 0 } else { Mat::from_rows(n_rows, total, rows.concat()).rank(f) };
    (total - rank) as u32
}
