//! Finite group machinery: full enumeration of PGL(3,q), its substitution
//! action on ternary forms, orbit-based canonical forms, stabilizers, and a
//! generic Burnside orbit counter that cross-checks itself against a direct
//! orbit partition.

use crate::error::{Error, Result};
use crate::forms::{monomials, TernaryForm, TernaryPoly};
use crate::gf::{Fe, FieldCtx};
use crate::plane::Point;
use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

/// An element of PGL(3,q): an invertible 3x3 matrix over F_q, normalized so
/// its first nonzero entry in row-major order is 1.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ProjMap(pub [[Fe; 3]; 3]);

impl ProjMap {
    pub fn new(ctx: &FieldCtx, m: [[Fe; 3]; 3]) -> Result<ProjMap> {
        if det3(ctx, &m).is_zero() {
            return Err(Error::Inconsistency(
                "matrix is not invertible".to_string(),
            ));
        }
        Ok(ProjMap(normalize_matrix(ctx, m)))
    }

    pub fn identity() -> ProjMap {
        let mut m = [[Fe::ZERO; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Fe::ONE;
        }
        ProjMap(m)
    }

    pub fn compose(&self, ctx: &FieldCtx, other: &ProjMap) -> ProjMap {
        let out = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                (0..3).fold(Fe::ZERO, |acc, k| {
                    ctx.add(acc, ctx.mul(self.0[i][k], other.0[k][j]))
                })
            })
        });
        ProjMap(normalize_matrix(ctx, out))
    }

    /// Image of a point under the matrix (M . P).
    pub fn apply_point(&self, ctx: &FieldCtx, p: &Point) -> Point {
        let c = p.coords();
        let mut out = [Fe::ZERO; 3];
        for (i, row) in self.0.iter().enumerate() {
            let mut acc = Fe::ZERO;
            for k in 0..3 {
                acc = ctx.add(acc, ctx.mul(row[k], c[k]));
            }
            out[i] = acc;
        }
        Point::new(ctx, out).expect("invertible matrix maps points to points")
    }

    /// Nine field-element strings, row-major.
    pub fn format(&self, ctx: &FieldCtx) -> String {
        let entries: Vec<String> = self
            .0
            .iter()
            .flatten()
            .map(|&e| ctx.format_elem(e))
            .collect();
        format!("[{}]", entries.join(","))
    }
}

fn det3(ctx: &FieldCtx, m: &[[Fe; 3]; 3]) -> Fe {
    // Cyclic expansion: sum_i m0i (m1,i+1 m2,i+2 - m1,i+2 m2,i+1).
    let mut acc = Fe::ZERO;
    for i in 0..3 {
        let minor = ctx.sub(
            ctx.mul(m[1][(i + 1) % 3], m[2][(i + 2) % 3]),
            ctx.mul(m[1][(i + 2) % 3], m[2][(i + 1) % 3]),
        );
        acc = ctx.add(acc, ctx.mul(m[0][i], minor));
    }
    acc
}

fn normalize_matrix(ctx: &FieldCtx, mut m: [[Fe; 3]; 3]) -> [[Fe; 3]; 3] {
    let lead = m
        .iter()
        .flatten()
        .find(|e| !e.is_zero())
        .copied()
        .expect("invertible matrix is nonzero");
    if lead != Fe::ONE {
        let scale = ctx.inv(lead).unwrap();
        for row in &mut m {
            for e in row {
                *e = ctx.mul(*e, scale);
            }
        }
    }
    m
}

/// Determinant-based minor check used while extending a partial basis: is v
/// in the span of a and b?
fn in_span2(ctx: &FieldCtx, a: &[Fe; 3], b: &[Fe; 3], v: &[Fe; 3]) -> bool {
    // v is in span(a,b) iff det(a,b,v) = 0 (a, b independent).
    let m = [*a, *b, *v];
    det3(ctx, &m).is_zero()
}

fn is_multiple(ctx: &FieldCtx, a: &[Fe; 3], v: &[Fe; 3]) -> bool {
    // Cross product vanishes iff proportional.
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if ctx.sub(ctx.mul(a[i], v[j]), ctx.mul(a[j], v[i])) != Fe::ZERO {
            return false;
        }
    }
    true
}

/// Expected size of PGL(3,q): q^3 (q^3 - 1)(q^2 - 1).
pub fn pgl3_order(q: u64) -> u64 {
    q.pow(3) * (q.pow(3) - 1) * (q * q - 1)
}

/// All of PGL(3,q), each class exactly once, in a deterministic order.
/// Supported for q <= 8.
pub fn pgl_enumerate(ctx: &FieldCtx) -> Result<Vec<ProjMap>> {
    let q = ctx.q();
    if q > 8 {
        return Err(Error::GroupTooLarge(q as u64));
    }
    let qs = q as u16;
    // Normalized first rows, in triple order.
    let mut first_rows: Vec<[Fe; 3]> = Vec::new();
    first_rows.push([Fe::ZERO, Fe::ZERO, Fe::ONE]);
    for t in 0..qs {
        first_rows.push([Fe::ZERO, Fe::ONE, Fe(t)]);
    }
    for s in 0..qs {
        for t in 0..qs {
            first_rows.push([Fe::ONE, Fe(s), Fe(t)]);
        }
    }
    let mut all_rows: Vec<[Fe; 3]> = Vec::with_capacity((q * q * q) as usize);
    for a in 0..qs {
        for b in 0..qs {
            for c in 0..qs {
                all_rows.push([Fe(a), Fe(b), Fe(c)]);
            }
        }
    }
    let mut out = Vec::with_capacity(pgl3_order(q as u64) as usize);
    for r0 in &first_rows {
        for r1 in &all_rows {
            if is_multiple(ctx, r0, r1) {
                continue;
            }
            for r2 in &all_rows {
                if in_span2(ctx, r0, r1, r2) {
                    continue;
                }
                out.push(ProjMap([*r0, *r1, *r2]));
            }
        }
    }
    if out.len() as u64 != pgl3_order(q as u64) {
        return Err(Error::Inconsistency(format!(
            "PGL(3,{q}) enumeration produced {} elements, expected {}",
            out.len(),
            pgl3_order(q as u64)
        )));
    }
    Ok(out)
}

/// The linear operator on degree-d coefficient vectors induced by the
/// substitution x_i -> sum_j M_ij x_j, stored row-major (m x m with
/// m = C(d+2,2)): new_coeffs = Op . old_coeffs.
pub fn substitution_operator(ctx: &FieldCtx, m: &ProjMap, d: usize) -> Vec<Fe> {
    let size = monomials(d).len();
    let mut op = vec![Fe::ZERO; size * size];
    // Powers of the three substituted linear forms, reused across columns.
    let rows: Vec<TernaryPoly> = (0..3)
        .map(|i| TernaryPoly {
            d: 1,
            coeffs: m.0[i].to_vec(),
        })
        .collect();
    let mut powers: Vec<Vec<TernaryPoly>> = Vec::with_capacity(3);
    for row in &rows {
        let mut pw = Vec::with_capacity(d + 1);
        pw.push(TernaryPoly {
            d: 0,
            coeffs: vec![Fe::ONE],
        });
        for e in 1..=d {
            let next = pw[e - 1].mul(ctx, row);
            pw.push(next);
        }
        powers.push(pw);
    }
    for (col, (e0, e1, e2)) in monomials(d).into_iter().enumerate() {
        let prod = powers[0][e0]
            .mul(ctx, &powers[1][e1])
            .mul(ctx, &powers[2][e2]);
        for (row_idx, &c) in prod.coeffs.iter().enumerate() {
            op[row_idx * size + col] = c;
        }
    }
    op
}

fn apply_operator(ctx: &FieldCtx, op: &[Fe], coeffs: &[Fe], out: &mut [Fe]) {
    let size = coeffs.len();
    for (r, slot) in out.iter_mut().enumerate() {
        let mut acc = Fe::ZERO;
        let row = &op[r * size..(r + 1) * size];
        for (&c, &x) in row.iter().zip(coeffs) {
            if !x.is_zero() && !c.is_zero() {
                acc = ctx.add(acc, ctx.mul(c, x));
            }
        }
        *slot = acc;
    }
}

fn normalize_coeffs(ctx: &FieldCtx, coeffs: &mut [Fe]) {
    if let Some(lead) = coeffs.iter().position(|c| !c.is_zero()) {
        if coeffs[lead] != Fe::ONE {
            let scale = ctx.inv(coeffs[lead]).unwrap();
            for c in coeffs {
                *c = ctx.mul(*c, scale);
            }
        }
    }
}

/// The substituted and renormalized form f(Mx). Point sets transform
/// compatibly: P lies on the image curve iff M.P lies on the original.
pub fn act_on_form(m: &ProjMap, f: &TernaryForm) -> TernaryForm {
    let ctx = f.ctx();
    let op = substitution_operator(ctx, m, f.degree());
    let mut out = vec![Fe::ZERO; f.coeffs().len()];
    apply_operator(ctx, &op, f.coeffs(), &mut out);
    normalize_coeffs(ctx, &mut out);
    TernaryForm::new(ctx, f.degree(), out).expect("invertible substitution keeps forms nonzero")
}

/// The full PGL(3,q) action on degree-d forms with all substitution
/// operators precomputed (when the table fits) so orbit scans are a single
/// matrix-vector product per element.
pub struct PglAction {
    ctx: Arc<FieldCtx>,
    d: usize,
    maps: Vec<ProjMap>,
    ops: Option<Vec<Vec<Fe>>>,
}

/// Cache operators only while the table stays comfortably small.
const OP_CACHE_LIMIT: usize = 32_000_000;

impl PglAction {
    pub fn new(ctx: &Arc<FieldCtx>, d: usize) -> Result<PglAction> {
        let maps = pgl_enumerate(ctx)?;
        let size = monomials(d).len();
        let ops = if maps.len() * size * size <= OP_CACHE_LIMIT {
            Some(
                maps.iter()
                    .map(|m| substitution_operator(ctx, m, d))
                    .collect(),
            )
        } else {
            None
        };
        Ok(PglAction {
            ctx: Arc::clone(ctx),
            d,
            maps,
            ops,
        })
    }

    pub fn group_order(&self) -> usize {
        self.maps.len()
    }

    pub fn maps(&self) -> &[ProjMap] {
        &self.maps
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    /// Apply group element idx to a raw normalized coefficient vector.
    pub fn apply(&self, idx: usize, coeffs: &[Fe], out: &mut Vec<Fe>) {
        out.resize(coeffs.len(), Fe::ZERO);
        match &self.ops {
            Some(ops) => apply_operator(&self.ctx, &ops[idx], coeffs, out),
            None => {
                let op = substitution_operator(&self.ctx, &self.maps[idx], self.d);
                apply_operator(&self.ctx, &op, coeffs, out);
            }
        }
        normalize_coeffs(&self.ctx, out);
    }

    pub fn act(&self, idx: usize, f: &TernaryForm) -> TernaryForm {
        let mut out = Vec::new();
        self.apply(idx, f.coeffs(), &mut out);
        TernaryForm::new(&self.ctx, self.d, out).expect("group action preserves nonzero forms")
    }

    /// All distinct images of f under the group.
    pub fn orbit(&self, f: &TernaryForm) -> Vec<Vec<Fe>> {
        let mut seen: std::collections::HashSet<Vec<Fe>> = std::collections::HashSet::new();
        let mut out = Vec::new();
        let mut img = Vec::new();
        for idx in 0..self.maps.len() {
            self.apply(idx, f.coeffs(), &mut img);
            if seen.insert(img.clone()) {
                out.push(img.clone());
            }
        }
        out
    }

    /// Lexicographically least coefficient vector in the orbit of f. Two
    /// forms are projectively equivalent iff their canonical forms agree.
    pub fn canonical_form(&self, f: &TernaryForm) -> TernaryForm {
        let mut best = f.coeffs().to_vec();
        let mut img = Vec::new();
        for idx in 0..self.maps.len() {
            self.apply(idx, f.coeffs(), &mut img);
            if img < best {
                std::mem::swap(&mut best, &mut img);
            }
        }
        TernaryForm::new(&self.ctx, self.d, best).expect("orbit members are nonzero")
    }

    /// Search for a witness M with f(Mx) = g.
    pub fn are_equivalent(&self, f: &TernaryForm, g: &TernaryForm) -> Option<ProjMap> {
        if f.degree() != g.degree() {
            return None;
        }
        let mut img = Vec::new();
        for idx in 0..self.maps.len() {
            self.apply(idx, f.coeffs(), &mut img);
            if img == g.coeffs() {
                return Some(self.maps[idx]);
            }
        }
        None
    }

    /// Order of the stabilizer of f in PGL(3,q).
    pub fn stabilizer_order(&self, f: &TernaryForm) -> usize {
        let mut img = Vec::new();
        (0..self.maps.len())
            .filter(|&idx| {
                self.apply(idx, f.coeffs(), &mut img);
                img == f.coeffs()
            })
            .count()
    }
}

/// Convenience wrappers that build the action on the fly.
pub fn canonical_form(f: &TernaryForm) -> Result<TernaryForm> {
    Ok(PglAction::new(f.ctx(), f.degree())?.canonical_form(f))
}

pub fn are_equivalent(f: &TernaryForm, g: &TernaryForm) -> Result<Option<ProjMap>> {
    if f.degree() != g.degree() {
        return Err(Error::DegreeMismatch {
            expected: f.degree(),
            found: g.degree(),
        });
    }
    Ok(PglAction::new(f.ctx(), f.degree())?.are_equivalent(f, g))
}

pub fn stabilizer_order(f: &TernaryForm) -> Result<usize> {
    Ok(PglAction::new(f.ctx(), f.degree())?.stabilizer_order(f))
}

/// Result of a Burnside orbit count.
#[derive(Debug, Clone)]
pub struct Orbits<I> {
    pub count: usize,
    /// Lexicographically least item of each orbit, sorted.
    pub representatives: Vec<I>,
}

/// Count orbits of a finite group action two independent ways: averaging
/// fixed points over the group, and a direct union-find partition of the
/// items, and fail loudly if they disagree (which would mean the action is
/// broken).
pub fn burnside_count<G, I, A>(group: &[G], items: &[I], action: A) -> Result<Orbits<I>>
where
    I: Clone + Ord + Hash + Eq,
    A: Fn(&G, &I) -> I,
{
    let index: HashMap<&I, usize> = items.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut parent: Vec<usize> = (0..items.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut fixed_total: u64 = 0;
    let mut saw_identity = items.is_empty();
    for g in group {
        let mut fixed: u64 = 0;
        for (i, item) in items.iter().enumerate() {
            let image = action(g, item);
            let &j = index.get(&image).ok_or(Error::ActionNotClosed)?;
            if i == j {
                fixed += 1;
            }
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri] = rj;
            }
        }
        if fixed == items.len() as u64 {
            saw_identity = true;
        }
        fixed_total += fixed;
    }
    if !saw_identity {
        return Err(Error::MissingIdentity);
    }
    if !group.is_empty() && !fixed_total.is_multiple_of(group.len() as u64) {
        return Err(Error::OrbitCountMismatch {
            fixed_route: fixed_total,
            partition_route: 0,
        });
    }
    let fixed_route = if group.is_empty() {
        items.len() as u64
    } else {
        fixed_total / group.len() as u64
    };
    // Direct partition route.
    let mut reps: HashMap<usize, I> = HashMap::new();
    for (i, item) in items.iter().enumerate() {
        let root = find(&mut parent, i);
        match reps.get_mut(&root) {
            Some(best) => {
                if item < best {
                    *best = item.clone();
                }
            }
            None => {
                reps.insert(root, item.clone());
            }
        }
    }
    let partition_route = reps.len() as u64;
    if fixed_route != partition_route {
        return Err(Error::OrbitCountMismatch {
            fixed_route,
            partition_route,
        });
    }
    let mut representatives: Vec<I> = reps.into_values().collect();
    representatives.sort();
    Ok(Orbits {
        count: partition_route as usize,
        representatives,
    })
}
