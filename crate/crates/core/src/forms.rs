//! Homogeneous ternary forms over F_q and their geometry: evaluation,
//! rational point counts, delta-line spectra, tangent lines, intersection
//! multiplicities along lines, flexes, smoothness, and the two point-count
//! bounds.
//!
//! Coefficients are dense vectors over the C(d+2,2) monomials
//! x0^e0 x1^e1 x2^e2 with e0+e1+e2 = d, ordered by descending lexicographic
//! (e0, e1, e2). A [`TernaryForm`] is scalar-normalized (first nonzero
//! coefficient 1) so it represents the curve, not a particular equation;
//! [`TernaryPoly`] is the raw unnormalized variant used for partials and
//! intermediate products.

use crate::error::{Error, Result};
use crate::gf::{self, Fe, FieldCtx};
use crate::plane::{self, Incidence, Line, Point};
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Exponent triples of degree d in descending lexicographic order.
pub fn monomials(d: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::with_capacity(monomial_count(d));
    for e0 in (0..=d).rev() {
        for e1 in (0..=d - e0).rev() {
            out.push((e0, e1, d - e0 - e1));
        }
    }
    out
}

pub const fn monomial_count(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

/// Position of x0^e0 x1^e1 x2^e2 in the fixed order.
#[inline]
pub fn monomial_index(d: usize, e0: usize, e1: usize) -> usize {
    let k = d - e0;
    k * (k + 1) / 2 + (k - e1)
}

/// Pascal's triangle rows 0..=n (plain integers; reduce mod p on use).
fn binomials(n: usize) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = vec![1u64; i + 1];
        for j in 1..i {
            row[j] = rows[i - 1][j - 1] + rows[i - 1][j];
        }
        rows.push(row);
    }
    rows
}

/// An unnormalized homogeneous polynomial of fixed degree; may be zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TernaryPoly {
    pub d: usize,
    pub coeffs: Vec<Fe>,
}

impl TernaryPoly {
    pub fn zero(d: usize) -> TernaryPoly {
        TernaryPoly {
            d,
            coeffs: vec![Fe::ZERO; monomial_count(d)],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The single monomial x0^e0 x1^e1 x2^e2 with the given coefficient.
    pub fn monomial(d: usize, e0: usize, e1: usize, c: Fe) -> TernaryPoly {
        let mut p = TernaryPoly::zero(d);
        p.coeffs[monomial_index(d, e0, e1)] = c;
        p
    }

    pub fn evaluate(&self, ctx: &FieldCtx, at: &[Fe; 3]) -> Fe {
        let mut acc = Fe::ZERO;
        for ((e0, e1, e2), &c) in monomials(self.d).into_iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let term = ctx.mul(
                ctx.mul(c, ctx.pow_u(at[0], e0 as u64)),
                ctx.mul(ctx.pow_u(at[1], e1 as u64), ctx.pow_u(at[2], e2 as u64)),
            );
            acc = ctx.add(acc, term);
        }
        acc
    }

    pub fn add(&self, ctx: &FieldCtx, other: &TernaryPoly) -> TernaryPoly {
        assert_eq!(self.d, other.d, "degree mismatch in polynomial sum");
        TernaryPoly {
            d: self.d,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| ctx.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, ctx: &FieldCtx, c: Fe) -> TernaryPoly {
        TernaryPoly {
            d: self.d,
            coeffs: self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &TernaryPoly) -> TernaryPoly {
        let d = self.d + other.d;
        let mut out = TernaryPoly::zero(d);
        let ma = monomials(self.d);
        let mb = monomials(other.d);
        for (ia, &ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (ib, &cb) in other.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let (a0, a1, _) = ma[ia];
                let (b0, b1, _) = mb[ib];
                let idx = monomial_index(d, a0 + b0, a1 + b1);
                out.coeffs[idx] = ctx.add(out.coeffs[idx], ctx.mul(ca, cb));
            }
        }
        out
    }

    /// Formal partial derivative with respect to variable i (0, 1 or 2).
    pub fn partial(&self, ctx: &FieldCtx, var: usize) -> TernaryPoly {
        assert!(self.d >= 1);
        let mut out = TernaryPoly::zero(self.d - 1);
        for ((e0, e1, e2), &c) in monomials(self.d).into_iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let e = [e0, e1, e2][var];
            if e == 0 {
                continue;
            }
            let scaled = ctx.mul(c, ctx.elem_from_int(e as u64));
            if scaled.is_zero() {
                continue;
            }
            let (n0, n1) = match var {
                0 => (e0 - 1, e1),
                1 => (e0, e1 - 1),
                _ => (e0, e1),
            };
            let idx = monomial_index(self.d - 1, n0, n1);
            out.coeffs[idx] = ctx.add(out.coeffs[idx], scaled);
        }
        out
    }
}

/// A scalar-normalized nonzero homogeneous form: the projective
/// representative of a plane curve of degree d.
#[derive(Clone)]
pub struct TernaryForm {
    ctx: Arc<FieldCtx>,
    poly: TernaryPoly,
}

impl PartialEq for TernaryForm {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.q() == other.ctx.q() && self.poly == other.poly
    }
}

impl Eq for TernaryForm {}

impl Hash for TernaryForm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.q().hash(state);
        self.poly.d.hash(state);
        self.poly.coeffs.hash(state);
    }
}

impl PartialOrd for TernaryForm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TernaryForm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.ctx.q(), self.poly.d, &self.poly.coeffs).cmp(&(
            other.ctx.q(),
            other.poly.d,
            &other.poly.coeffs,
        ))
    }
}

impl fmt::Debug for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TernaryForm(q={}, {})", self.ctx.q(), self.to_text())
    }
}

impl TernaryForm {
    pub fn new(ctx: &Arc<FieldCtx>, d: usize, coeffs: Vec<Fe>) -> Result<TernaryForm> {
        let expected = monomial_count(d);
        if coeffs.len() != expected {
            return Err(Error::CoefficientCount {
                expected,
                found: coeffs.len(),
            });
        }
        TernaryForm::from_poly(ctx, TernaryPoly { d, coeffs })
    }

    /// Normalize an arbitrary nonzero polynomial into a form.
    pub fn from_poly(ctx: &Arc<FieldCtx>, poly: TernaryPoly) -> Result<TernaryForm> {
        let lead = poly
            .coeffs
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(Error::ZeroForm)?;
        let poly = if poly.coeffs[lead] == Fe::ONE {
            poly
        } else {
            poly.scale(ctx, ctx.inv(poly.coeffs[lead])?)
        };
        Ok(TernaryForm {
            ctx: Arc::clone(ctx),
            poly,
        })
    }

    /// Build from a list of (e0, e1, e2, coefficient) terms.
    pub fn from_terms(
        ctx: &Arc<FieldCtx>,
        d: usize,
        terms: &[(usize, usize, usize, Fe)],
    ) -> Result<TernaryForm> {
        let mut poly = TernaryPoly::zero(d);
        for &(e0, e1, e2, c) in terms {
            if e0 + e1 + e2 != d {
                return Err(Error::DegreeMismatch {
                    expected: d,
                    found: e0 + e1 + e2,
                });
            }
            let idx = monomial_index(d, e0, e1);
            poly.coeffs[idx] = ctx.add(poly.coeffs[idx], c);
        }
        TernaryForm::from_poly(ctx, poly)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn degree(&self) -> usize {
        self.poly.d
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.poly.coeffs
    }

    pub fn as_poly(&self) -> &TernaryPoly {
        &self.poly
    }

    /// Evaluate at a projective point. Zero iff the point is on the curve;
    /// nonzero values depend on the chosen representative but homogeneity
    /// makes "zero or not" well defined.
    pub fn evaluate(&self, p: &Point) -> Fe {
        self.poly.evaluate(&self.ctx, &p.coords())
    }

    pub fn rational_points(&self) -> Vec<Point> {
        plane::enumerate_points(&self.ctx)
            .into_iter()
            .filter(|p| self.evaluate(p).is_zero())
            .collect()
    }

    /// N_q: the number of F_q-rational points.
    pub fn count_points(&self) -> usize {
        plane::enumerate_points(&self.ctx)
            .iter()
            .filter(|p| self.evaluate(p).is_zero())
            .count()
    }

    /// True iff some F_q-linear form divides the form, decided by trial
    /// division against all q^2+q+1 normalized linear forms.
    pub fn has_linear_component(&self) -> bool {
        plane::enumerate_lines(&self.ctx)
            .iter()
            .any(|l| self.is_divisible_by(l))
    }

    /// Exact divisibility by a linear form, via substitution: eliminating
    /// the leading variable of l must send the form to zero.
    pub fn is_divisible_by(&self, l: &Line) -> bool {
        self.remainder_by_linear(l).iter().all(|c| c.is_zero())
    }

    /// Substitute the leading variable of the (normalized) linear form away
    /// and return the resulting binary form's coefficients. Zero vector iff
    /// l divides the form.
    fn remainder_by_linear(&self, l: &Line) -> Vec<Fe> {
        let ctx = &self.ctx;
        let d = self.poly.d;
        let [a, b, c] = l.coeffs();
        let binom = binomials(d);
        // Result is a binary form of degree d in the two remaining
        // variables; index by the first one's exponent.
        let mut out = vec![Fe::ZERO; d + 1];
        if a == Fe::ONE {
            // x0 = -(b x1 + c x2); remaining variables (x1, x2).
            let nb = ctx.neg(b);
            let nc = ctx.neg(c);
            for ((e0, e1, _e2), &cf) in monomials(d).into_iter().zip(&self.poly.coeffs) {
                if cf.is_zero() {
                    continue;
                }
                for (k, &bk) in binom[e0].iter().enumerate() {
                    let coef = ctx.mul(
                        cf,
                        ctx.mul(
                            ctx.elem_from_int(bk),
                            ctx.mul(ctx.pow_u(nb, k as u64), ctx.pow_u(nc, (e0 - k) as u64)),
                        ),
                    );
                    let idx = e1 + k;
                    out[idx] = ctx.add(out[idx], coef);
                }
            }
        } else if b == Fe::ONE {
            // a = 0; x1 = -c x2; remaining variables (x0, x2).
            let nc = ctx.neg(c);
            for ((e0, e1, _e2), &cf) in monomials(d).into_iter().zip(&self.poly.coeffs) {
                if cf.is_zero() {
                    continue;
                }
                let coef = ctx.mul(cf, ctx.pow_u(nc, e1 as u64));
                out[e0] = ctx.add(out[e0], coef);
            }
        } else {
            // l is x2 = 0; keep monomials with e2 = 0, variables (x0, x1).
            for ((e0, _e1, e2), &cf) in monomials(d).into_iter().zip(&self.poly.coeffs) {
                if e2 == 0 {
                    out[e0] = ctx.add(out[e0], cf);
                }
            }
        }
        out
    }

    /// delta-line histogram over all lines of the plane.
    pub fn line_spectrum(&self) -> LineSpectrum {
        self.line_spectrum_with(&Incidence::new(&self.ctx))
    }

    pub fn line_spectrum_with(&self, inc: &Incidence) -> LineSpectrum {
        let on_curve: Vec<bool> = inc
            .points
            .iter()
            .map(|p| self.evaluate(p).is_zero())
            .collect();
        let mut counts = BTreeMap::new();
        for pts in &inc.on_line {
            let delta = pts.iter().filter(|&&i| on_curve[i]).count();
            *counts.entry(delta).or_insert(0usize) += 1;
        }
        LineSpectrum { counts }
    }

    /// The three formal partial derivatives (degree d-1, unnormalized, any
    /// of them may vanish identically).
    pub fn partials(&self) -> [TernaryPoly; 3] {
        [
            self.poly.partial(&self.ctx, 0),
            self.poly.partial(&self.ctx, 1),
            self.poly.partial(&self.ctx, 2),
        ]
    }

    /// The tangent line at a smooth rational point of the curve:
    /// sum_i (df/dx_i)(P) x_i = 0.
    pub fn tangent_line(&self, p: &Point) -> Result<Line> {
        if !self.evaluate(p).is_zero() {
            return Err(Error::PointNotOnCurve);
        }
        let at = p.coords();
        let grad = self.partials().map(|pd| pd.evaluate(&self.ctx, &at));
        if grad.iter().all(|c| c.is_zero()) {
            return Err(Error::SingularPoint(p.format(&self.ctx)));
        }
        Line::new(&self.ctx, grad)
    }

    /// Restrict the form along a parameterized line: coefficients of the
    /// binary form g(s,t) = f(sA + tB), indexed by the exponent of s.
    pub fn restrict_to_line(&self, l: &Line) -> Vec<Fe> {
        let ctx = &self.ctx;
        let d = self.poly.d;
        let (pa, pb) = plane::parameterize_line(ctx, l);
        let a = pa.coords();
        let b = pb.coords();
        let binom = binomials(d);
        let mut out = vec![Fe::ZERO; d + 1];
        for ((e0, e1, e2), &cf) in monomials(d).into_iter().zip(&self.poly.coeffs) {
            if cf.is_zero() {
                continue;
            }
            // Expand (s a_i + t b_i)^{e_i} for each variable and convolve.
            let mut acc = vec![Fe::ZERO; d + 1];
            acc[0] = cf;
            let mut acc_deg = 0usize;
            for (i, e) in [e0, e1, e2].into_iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut next = vec![Fe::ZERO; d + 1];
                for k in 0..=e {
                    let term = ctx.mul(
                        ctx.elem_from_int(binom[e][k]),
                        ctx.mul(ctx.pow_u(a[i], k as u64), ctx.pow_u(b[i], (e - k) as u64)),
                    );
                    if term.is_zero() {
                        continue;
                    }
                    for j in 0..=acc_deg {
                        if acc[j].is_zero() {
                            continue;
                        }
                        next[j + k] = ctx.add(next[j + k], ctx.mul(acc[j], term));
                    }
                }
                acc = next;
                acc_deg += e;
            }
            for (j, &c) in acc.iter().enumerate() {
                out[j] = ctx.add(out[j], c);
            }
        }
        out
    }

    /// Local intersection multiplicity i(l.C; P) of the curve and a line at
    /// a rational point of l, as the root multiplicity of the restriction.
    /// Zero when P is not on the curve. Errors with
    /// [`Error::LineIsComponent`] when l divides the form.
    pub fn intersection_multiplicity(&self, l: &Line, p: &Point) -> Result<usize> {
        let ctx = &self.ctx;
        if !plane::incident(ctx, l, p) {
            return Err(Error::PointNotOnLine);
        }
        let g = self.restrict_to_line(l);
        if g.iter().all(|c| c.is_zero()) {
            return Err(Error::LineIsComponent);
        }
        let (pa, pb) = plane::parameterize_line(ctx, l);
        let (s0, t0) = plane::projective_line_params(ctx)
            .into_iter()
            .find(|&(s, t)| plane::combine(ctx, s, &pa, t, &pb).unwrap() == *p)
            .expect("incident point must appear in the parameterization");
        let d = self.poly.d;
        if t0.is_zero() {
            // P at parameter (1:0): multiplicity is the power of t in g.
            let top = g.iter().rposition(|c| !c.is_zero()).unwrap();
            return Ok(d - top);
        }
        // Dehomogenize with u = s/t and count the root multiplicity at u0.
        let u0 = ctx.div(s0, t0)?;
        let mut work = g;
        while work.last() == Some(&Fe::ZERO) {
            work.pop();
        }
        let mut mult = 0;
        while work.len() > 1 && gf::eval_univariate(ctx, &work, u0).is_zero() {
            work = univ_quotient(ctx, &work, u0);
            mult += 1;
        }
        Ok(mult)
    }

    /// The rational flexes: points P of C(F_q) where the tangent meets the
    /// curve with multiplicity at least 3. Errors if any rational point is
    /// singular. A tangent that is a whole component counts as a flex
    /// (unbounded multiplicity).
    pub fn flexes(&self) -> Result<Vec<Point>> {
        let mut out = Vec::new();
        for p in self.rational_points() {
            let tangent = self.tangent_line(&p)?;
            match self.intersection_multiplicity(&tangent, &p) {
                Ok(m) if m >= 3 => out.push(p),
                Ok(_) => {}
                Err(Error::LineIsComponent) => out.push(p),
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }

    /// Smoothness over the algebraic closure, by searching for common zeros
    /// of the form and its partials over every extension F_{q^k},
    /// k <= d(d-1). The singular locus of a plane curve of degree d is cut
    /// out by two of the partials, so by Bezout every singular closed point
    /// has residue degree at most d(d-1) and this search is exhaustive.
    pub fn is_smooth(&self) -> Result<bool> {
        Ok(SmoothChecker::new(&self.ctx, self.poly.d)?.is_smooth(self))
    }
}

fn univ_quotient(ctx: &FieldCtx, poly: &[Fe], r: Fe) -> Vec<Fe> {
    let d = poly.len() - 1;
    let mut out = vec![Fe::ZERO; d];
    let mut carry = Fe::ZERO;
    for i in (0..d).rev() {
        carry = ctx.add(poly[i + 1], ctx.mul(carry, r));
        out[i] = carry;
    }
    out
}

/// Histogram of delta-lines: how many lines meet the curve's rational point
/// set in exactly delta points.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LineSpectrum {
    counts: BTreeMap<usize, usize>,
}

impl LineSpectrum {
    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    pub fn count(&self, delta: usize) -> usize {
        self.counts.get(&delta).copied().unwrap_or(0)
    }

    /// Total number of lines (q^2 + q + 1).
    pub fn total_lines(&self) -> usize {
        self.counts.values().sum()
    }

    /// Sum of delta * count(delta): the number of incident (line, rational
    /// point of C) pairs, which equals (q+1) * N_q.
    pub fn incidence_pairs(&self) -> usize {
        self.counts.iter().map(|(d, c)| d * c).sum()
    }
}

impl fmt::Display for LineSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .counts
            .iter()
            .map(|(d, c)| format!("{d}: {c}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// The two point-count bounds for a degree-d curve over F_q without
/// F_q-linear components: the genus-based bound
/// q + 1 + (d-1)(d-2) sqrt(q) (floored) and (d-1)q + 1. They agree at
/// d = sqrt(q) + 1. Lines (d = 1) are excluded by hypothesis.
pub fn bounds(d: u64, q: u64) -> Result<(u64, u64)> {
    if d < 2 {
        return Err(Error::UnsupportedDegree(d as usize));
    }
    let a = (d - 1) * (d - 2);
    let aubry_perret = q + 1 + (a * a * q).isqrt();
    let sziklai = (d - 1) * q + 1;
    Ok((aubry_perret, sziklai))
}

/// Reduced row-echelon basis of the bivariate polynomials of total degree
/// <= max_deg vanishing on a given set of affine points. Monomials x^i y^j
/// are ordered by descending lexicographic (i, j).
pub struct VanishingBasis {
    pub max_deg: usize,
    /// (i, j) exponent pairs in column order.
    pub monomials: Vec<(usize, usize)>,
    /// Basis rows in reduced row-echelon form over the monomial columns.
    pub rows: Vec<Vec<Fe>>,
}

impl VanishingBasis {
    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn format_row(&self, ctx: &FieldCtx, row: usize) -> String {
        let mut parts = Vec::new();
        for (&(i, j), &c) in self.monomials.iter().zip(&self.rows[row]) {
            if c.is_zero() {
                continue;
            }
            let mut term = String::new();
            if c != Fe::ONE || (i == 0 && j == 0) {
                term.push_str(&ctx.format_elem(c));
                if i > 0 || j > 0 {
                    term.push('*');
                }
            }
            if i > 0 {
                term.push_str(&if i == 1 { "x".into() } else { format!("x^{i}") });
            }
            if j > 0 {
                if i > 0 {
                    term.push('*');
                }
                term.push_str(&if j == 1 { "y".into() } else { format!("y^{j}") });
            }
            parts.push(term);
        }
        parts.join(" + ")
    }
}

fn bivariate_monomials(max_deg: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in (0..=max_deg).rev() {
        for j in (0..=max_deg - i).rev() {
            out.push((i, j));
        }
    }
    out
}

/// Basis of the evaluation-kernel: all bivariate polynomials of total
/// degree <= max_deg that vanish at every given point.
#[allow(clippy::needless_range_loop)]
pub fn vanishing_space(ctx: &FieldCtx, points: &[(Fe, Fe)], max_deg: usize) -> VanishingBasis {
    let monos = bivariate_monomials(max_deg);
    let ncols = monos.len();
    // Evaluation matrix: one row per point.
    let mut mat: Vec<Vec<Fe>> = points
        .iter()
        .map(|&(x, y)| {
            monos
                .iter()
                .map(|&(i, j)| ctx.mul(ctx.pow_u(x, i as u64), ctx.pow_u(y, j as u64)))
                .collect()
        })
        .collect();
    // Forward elimination to row echelon form, tracking pivot columns.
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pivot_row) = (rank..mat.len()).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(rank, pivot_row);
        let inv = ctx.inv(mat[rank][col]).unwrap();
        for c in col..ncols {
            mat[rank][c] = ctx.mul(mat[rank][c], inv);
        }
        for r in 0..mat.len() {
            if r != rank && !mat[r][col].is_zero() {
                let factor = mat[r][col];
                for c in col..ncols {
                    let delta = ctx.mul(factor, mat[rank][c]);
                    mat[r][c] = ctx.sub(mat[r][c], delta);
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    // Nullspace vector per free column.
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut rows: Vec<Vec<Fe>> = Vec::new();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Fe::ZERO; ncols];
        v[free] = Fe::ONE;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = ctx.neg(mat[r][free]);
        }
        rows.push(v);
    }
    // Bring the basis itself to reduced row echelon form for a canonical
    // answer.
    rref(ctx, &mut rows);
    VanishingBasis {
        max_deg,
        monomials: monos,
        rows,
    }
}

#[allow(clippy::needless_range_loop)]
fn rref(ctx: &FieldCtx, rows: &mut [Vec<Fe>]) {
    if rows.is_empty() {
        return;
    }
    let ncols = rows[0].len();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pivot_row) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let inv = ctx.inv(rows[rank][col]).unwrap();
        for c in 0..ncols {
            rows[rank][c] = ctx.mul(rows[rank][c], inv);
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col];
                for c in 0..ncols {
                    let delta = ctx.mul(factor, rows[rank][c]);
                    rows[r][c] = ctx.sub(rows[r][c], delta);
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
}

/// Reusable smoothness tester: one extension context per residue degree
/// k <= d(d-1), built once.
pub struct SmoothChecker {
    base_q: u32,
    d: usize,
    levels: Vec<SmoothLevel>,
}

struct SmoothLevel {
    ctx: FieldCtx,
    /// Embedding table: base handle -> extension handle.
    embed: Vec<Fe>,
}

impl SmoothChecker {
    pub fn new(base: &FieldCtx, d: usize) -> Result<SmoothChecker> {
        if d == 0 || d > 4 {
            return Err(Error::UnsupportedDegree(d));
        }
        let mut levels = Vec::new();
        for k in 1..=d * (d - 1) {
            let ctx = FieldCtx::new(base.p(), base.degree() * k as u32)?;
            let embed = gf::Embedding::new(base, &ctx)?.table();
            levels.push(SmoothLevel { ctx, embed });
        }
        Ok(SmoothChecker {
            base_q: base.q(),
            d,
            levels,
        })
    }

    /// True iff the form and its partials have no common projective zero
    /// over any of the extensions.
    pub fn is_smooth(&self, f: &TernaryForm) -> bool {
        assert_eq!(f.ctx().q(), self.base_q);
        assert_eq!(f.degree(), self.d);
        let partials = f.partials();
        for level in &self.levels {
            let system: Vec<(usize, Vec<Fe>)> = std::iter::once((self.d, f.coeffs().to_vec()))
                .chain(partials.iter().map(|p| (p.d, p.coeffs.clone())))
                .map(|(deg, coeffs)| {
                    (
                        deg,
                        coeffs
                            .iter()
                            .map(|c| level.embed[c.0 as usize])
                            .collect::<Vec<Fe>>(),
                    )
                })
                .collect();
            if has_common_projective_zero(&level.ctx, &system) {
                return false;
            }
        }
        true
    }
}

/// Search P^2 over the given field for a common zero of homogeneous
/// polynomials, chart by chart. Polynomials are (degree, coefficient)
/// pairs in the fixed monomial order; identically-zero entries are allowed.
fn has_common_projective_zero(ctx: &FieldCtx, system: &[(usize, Vec<Fe>)]) -> bool {
    // Point (0:0:1): each polynomial evaluates to its x2^d coefficient.
    if system
        .iter()
        .all(|(_, coeffs)| coeffs.last().copied().unwrap_or(Fe::ZERO).is_zero())
    {
        return true;
    }
    // Chart (0:1:t).
    let restricted: Vec<Vec<Fe>> = system
        .iter()
        .map(|(d, coeffs)| {
            let mut out = vec![Fe::ZERO; d + 1];
            for ((e0, _e1, e2), &c) in monomials(*d).into_iter().zip(coeffs) {
                if e0 == 0 && !c.is_zero() {
                    out[e2] = ctx.add(out[e2], c);
                }
            }
            out
        })
        .collect();
    for t in ctx.elements() {
        if restricted
            .iter()
            .all(|p| gf::eval_univariate(ctx, p, t).is_zero())
        {
            return true;
        }
    }
    // Chart (1:s:t): for each s, look for a common root in t.
    let max_d = system.iter().map(|(d, _)| *d).max().unwrap_or(0);
    let mut s_pows = vec![Fe::ONE; max_d + 1];
    for s in ctx.elements() {
        for i in 1..=max_d {
            s_pows[i] = ctx.mul(s_pows[i - 1], s);
        }
        let mut gcd_acc: Option<Vec<Fe>> = None;
        let mut all_zero = true;
        for (d, coeffs) in system {
            let mut uni = vec![Fe::ZERO; d + 1];
            for ((_e0, e1, e2), &c) in monomials(*d).into_iter().zip(coeffs) {
                if c.is_zero() {
                    continue;
                }
                uni[e2] = ctx.add(uni[e2], ctx.mul(c, s_pows[e1]));
            }
            while uni.last() == Some(&Fe::ZERO) {
                uni.pop();
            }
            if uni.is_empty() {
                continue; // identically zero along this fiber
            }
            all_zero = false;
            gcd_acc = Some(match gcd_acc {
                None => uni,
                Some(g) => univ_gcd(ctx, &g, &uni),
            });
            if let Some(g) = &gcd_acc {
                if g.len() == 1 {
                    break; // constant gcd: no common root on this fiber
                }
            }
        }
        if all_zero {
            return true; // the whole fiber consists of common zeros
        }
        let g = gcd_acc.unwrap();
        if g.len() > 1 && has_root_in_field(ctx, &g) {
            return true;
        }
    }
    false
}

fn univ_gcd(ctx: &FieldCtx, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    while !b.is_empty() {
        let r = univ_rem(ctx, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// Remainder of a by b (b nonzero, trimmed).
fn univ_rem(ctx: &FieldCtx, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = ctx.inv(b[db]).unwrap();
    while r.len() > db {
        let coef = ctx.mul(*r.last().unwrap(), lead_inv);
        if !coef.is_zero() {
            let shift = r.len() - 1 - db;
            for (i, &bi) in b.iter().enumerate() {
                let delta = ctx.mul(coef, bi);
                r[i + shift] = ctx.sub(r[i + shift], delta);
            }
        }
        r.pop();
        while r.last() == Some(&Fe::ZERO) {
            r.pop();
        }
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Whether a nonconstant univariate polynomial has a root in F_q, via
/// gcd(g, x^q - x) computed with modular exponentiation.
fn has_root_in_field(ctx: &FieldCtx, g: &[Fe]) -> bool {
    if g.len() <= 1 {
        return false;
    }
    if g.len() == 2 {
        return true; // linear
    }
    // x^q mod g by square and multiply. Intermediate values may collapse to
    // the zero polynomial when g has repeated factors of x.
    let mut result = vec![Fe::ONE];
    let mut base = univ_rem(ctx, &[Fe::ZERO, Fe::ONE], g);
    let mut e = ctx.q() as u64;
    while e > 0 {
        if e & 1 == 1 {
            result = univ_mulmod(ctx, &result, &base, g);
        }
        e >>= 1;
        if e > 0 {
            base = univ_mulmod(ctx, &base, &base, g);
        }
    }
    // x^q - x mod g
    let mut frob = result;
    if frob.len() < 2 {
        frob.resize(2, Fe::ZERO);
    }
    frob[1] = ctx.sub(frob[1], Fe::ONE);
    while frob.last() == Some(&Fe::ZERO) {
        frob.pop();
    }
    if frob.is_empty() {
        return true; // g divides x^q - x: all roots rational
    }
    univ_gcd(ctx, g, &frob).len() > 1
}

fn univ_mulmod(ctx: &FieldCtx, a: &[Fe], b: &[Fe], m: &[Fe]) -> Vec<Fe> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![Fe::ZERO; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = ctx.add(prod[i + j], ctx.mul(ai, bj));
        }
    }
    while prod.last() == Some(&Fe::ZERO) {
        prod.pop();
    }
    if prod.is_empty() {
        return prod;
    }
    univ_rem(ctx, &prod, m)
}

// ---- text grammar ----

impl TernaryForm {
    /// Canonical expression text: terms "c*x0^a*x1^b*x2^c" joined by " + ",
    /// coefficients in field element syntax, unit coefficients and unit
    /// exponents omitted.
    pub fn to_text(&self) -> String {
        let ctx = &self.ctx;
        let mut parts = Vec::new();
        for ((e0, e1, e2), &c) in monomials(self.poly.d).into_iter().zip(&self.poly.coeffs) {
            if c.is_zero() {
                continue;
            }
            let mut factors = Vec::new();
            if c != Fe::ONE {
                factors.push(ctx.format_elem(c));
            }
            for (name, e) in [("x0", e0), ("x1", e1), ("x2", e2)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }

    /// Raw coefficient-vector text: "q=<q> d=<d> coeffs=[...]" in the fixed
    /// monomial order.
    pub fn to_raw_text(&self) -> String {
        let coeffs: Vec<String> = self
            .poly
            .coeffs
            .iter()
            .map(|&c| self.ctx.format_elem(c))
            .collect();
        format!(
            "q={} d={} coeffs=[{}]",
            self.ctx.q(),
            self.poly.d,
            coeffs.join(",")
        )
    }
}

/// Parse either the expression grammar ("x0^3 + w*x1^3 + w2*x2^3") or the
/// raw vector form ("q=4 d=3 coeffs=[...]").
pub fn parse_form(ctx: &Arc<FieldCtx>, text: &str) -> Result<TernaryForm> {
    let trimmed = text.trim();
    if trimmed.starts_with("q=") {
        return parse_raw_form(ctx, trimmed);
    }
    parse_expression(ctx, text)
}

fn parse_raw_form(ctx: &Arc<FieldCtx>, text: &str) -> Result<TernaryForm> {
    let err = |pos: usize, msg: &str| Error::Parse {
        pos,
        msg: msg.to_string(),
    };
    let mut q: Option<u64> = None;
    let mut d: Option<usize> = None;
    let mut coeffs: Option<Vec<Fe>> = None;
    for piece in text.split_whitespace() {
        if let Some(v) = piece.strip_prefix("q=") {
            q = Some(v.parse().map_err(|_| err(0, "invalid q"))?);
        } else if let Some(v) = piece.strip_prefix("d=") {
            d = Some(v.parse().map_err(|_| err(0, "invalid d"))?);
        } else if let Some(v) = piece.strip_prefix("coeffs=") {
            let inner = v
                .strip_prefix('[')
                .and_then(|v| v.strip_suffix(']'))
                .ok_or_else(|| err(0, "coeffs must be bracketed"))?;
            let mut list = Vec::new();
            if !inner.is_empty() {
                for item in inner.split(',') {
                    list.push(ctx.parse_elem(item)?);
                }
            }
            coeffs = Some(list);
        } else {
            return Err(err(0, "expected q=, d= and coeffs= fields"));
        }
    }
    let q = q.ok_or_else(|| err(0, "missing q="))?;
    if q != ctx.q() as u64 {
        return Err(err(0, "declared q does not match the field"));
    }
    let d = d.ok_or_else(|| err(0, "missing d="))?;
    let coeffs = coeffs.ok_or_else(|| err(0, "missing coeffs="))?;
    TernaryForm::new(ctx, d, coeffs)
}

fn parse_expression(ctx: &Arc<FieldCtx>, text: &str) -> Result<TernaryForm> {
    let mut terms: Vec<(usize, usize, usize, Fe)> = Vec::new();
    let mut degree: Option<usize> = None;
    let mut offset = 0usize;
    for chunk in text.split('+') {
        let chunk_start = offset;
        offset += chunk.len() + 1;
        let term = chunk.trim();
        if term.is_empty() {
            return Err(Error::Parse {
                pos: chunk_start,
                msg: "empty term".to_string(),
            });
        }
        let mut coeff = Fe::ONE;
        let mut exps = [0usize; 3];
        for factor in term.split('*') {
            let factor = factor.trim();
            if let Some(rest) = factor.strip_prefix('x') {
                let (var, exp_str) = match rest.split_once('^') {
                    Some((v, e)) => (v, Some(e)),
                    None => (rest, None),
                };
                let var: usize = var.parse().map_err(|_| Error::Parse {
                    pos: chunk_start,
                    msg: format!("invalid variable '{factor}'"),
                })?;
                if var > 2 {
                    return Err(Error::Parse {
                        pos: chunk_start,
                        msg: format!("variable index {var} out of range (x0, x1, x2)"),
                    });
                }
                let exp: usize = match exp_str {
                    Some(e) => e.parse().map_err(|_| Error::Parse {
                        pos: chunk_start,
                        msg: format!("invalid exponent in '{factor}'"),
                    })?,
                    None => 1,
                };
                exps[var] += exp;
            } else {
                coeff = ctx.mul(coeff, ctx.parse_elem(factor)?);
            }
        }
        let total = exps[0] + exps[1] + exps[2];
        match degree {
            None => degree = Some(total),
            Some(d) if d != total => {
                return Err(Error::Parse {
                    pos: chunk_start,
                    msg: format!("non-homogeneous input: term of degree {total}, expected {d}"),
                })
            }
            _ => {}
        }
        terms.push((exps[0], exps[1], exps[2], coeff));
    }
    let d = degree.ok_or(Error::Parse {
        pos: 0,
        msg: "empty expression".to_string(),
    })?;
    if d == 0 {
        return Err(Error::Parse {
            pos: 0,
            msg: "constant expression does not define a curve".to_string(),
        });
    }
    TernaryForm::from_terms(ctx, d, &terms)
}

/// The Fermat cubic x0^3 + x1^3 + x2^3 (the Hermitian curve at q = 4).
pub fn fermat_cubic(ctx: &Arc<FieldCtx>) -> TernaryForm {
    TernaryForm::from_terms(
        ctx,
        3,
        &[
            (3, 0, 0, Fe::ONE),
            (0, 3, 0, Fe::ONE),
            (0, 0, 3, Fe::ONE),
        ],
    )
    .expect("fermat cubic is nonzero")
}

/// The quartic (x0+x1+x2)^4 + (x0x1+x1x2+x2x0)^2 + x0x1x2(x0+x1+x2) over
/// F_4, the unique exception to the (d-1)q + 1 point bound.
pub fn exceptional_quartic(ctx: &Arc<FieldCtx>) -> Result<TernaryForm> {
    if ctx.q() != 4 {
        return Err(Error::Inconsistency(
            "the exceptional quartic lives over F_4".to_string(),
        ));
    }
    let lin = TernaryPoly {
        d: 1,
        coeffs: vec![Fe::ONE, Fe::ONE, Fe::ONE],
    };
    let mut quad = TernaryPoly::zero(2);
    for (e0, e1) in [(1, 1), (0, 1), (1, 0)] {
        quad.coeffs[monomial_index(2, e0, e1)] = Fe::ONE;
    }
    let xyz = TernaryPoly::monomial(3, 1, 1, Fe::ONE);
    let lin2 = lin.mul(ctx, &lin);
    let lin4 = lin2.mul(ctx, &lin2);
    let quad2 = quad.mul(ctx, &quad);
    let total = lin4.add(ctx, &quad2).add(ctx, &xyz.mul(ctx, &lin));
    TernaryForm::from_poly(ctx, total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(2, 2).unwrap())
    }

    fn sziklai_curve(ctx: &Arc<FieldCtx>) -> TernaryForm {
        // x0^3 + w x1^3 + w^2 x2^3
        let w = ctx.generator();
        let w2 = ctx.mul(w, w);
        TernaryForm::from_terms(ctx, 3, &[(3, 0, 0, Fe::ONE), (0, 3, 0, w), (0, 0, 3, w2)])
            .unwrap()
    }

    fn quartic(ctx: &Arc<FieldCtx>) -> TernaryForm {
        exceptional_quartic(ctx).unwrap()
    }

    #[test]
    fn monomial_order_and_index() {
        let m = monomials(3);
        assert_eq!(m.len(), 10);
        assert_eq!(m[0], (3, 0, 0));
        assert_eq!(m[1], (2, 1, 0));
        assert_eq!(m[9], (0, 0, 3));
        for (i, &(e0, e1, _)) in m.iter().enumerate() {
            assert_eq!(monomial_index(3, e0, e1), i);
        }
    }

    #[test]
    fn evaluation_examples() {
        let ctx = f4();
        let fermat = fermat_cubic(&ctx);
        let p = Point::new(&ctx, [Fe::ZERO, Fe::ONE, Fe::ONE]).unwrap();
        assert!(fermat.evaluate(&p).is_zero());
        let e0 = Point::new(&ctx, [Fe::ONE, Fe::ZERO, Fe::ZERO]).unwrap();
        assert_eq!(fermat.evaluate(&e0), Fe::ONE);
        let all_one = Point::new(&ctx, [Fe::ONE, Fe::ONE, Fe::ONE]).unwrap();
        assert!(sziklai_curve(&ctx).evaluate(&all_one).is_zero());
    }

    #[test]
    fn point_counts() {
        let ctx = f4();
        assert_eq!(fermat_cubic(&ctx).count_points(), 9);
        assert_eq!(sziklai_curve(&ctx).count_points(), 9);
        // The exceptional quartic beats (d-1)q + 1 = 13.
        let quartic = quartic(&ctx);
        assert!(quartic.count_points() > 13);
    }

    #[test]
    fn linear_component_detection() {
        let ctx = f4();
        // x0 * (x0^2 + x1 x2)
        let f = TernaryForm::from_terms(&ctx, 3, &[(3, 0, 0, Fe::ONE), (1, 1, 1, Fe::ONE)])
            .unwrap();
        assert!(f.has_linear_component());
        assert!(!fermat_cubic(&ctx).has_linear_component());
        assert!(!sziklai_curve(&ctx).has_linear_component());
    }

    #[test]
    fn spectrum_examples() {
        let ctx = f4();
        let spec = sziklai_curve(&ctx).line_spectrum();
        assert_eq!(spec.count(0), 3);
        assert_eq!(spec.count(2), 9);
        assert_eq!(spec.count(3), 9);
        assert_eq!(spec.total_lines(), 21);

        let f3 = Arc::new(FieldCtx::new(3, 1).unwrap());
        // alpha = beta = gamma = 1 works over F_3 since 1+1+1 = 0.
        let c111 = TernaryForm::from_terms(
            &f3,
            2,
            &[(2, 0, 0, Fe::ONE), (0, 2, 0, Fe::ONE), (0, 0, 2, Fe::ONE)],
        )
        .unwrap();
        let spec = c111.line_spectrum();
        assert_eq!(spec.count(0), 3);
        assert_eq!(spec.count(1), 4);
        assert_eq!(spec.count(2), 6);
        assert_eq!(spec.total_lines(), 13);
    }

    #[test]
    fn spectrum_incidence_identity() {
        // Sum over delta of delta * count = (q+1) * N for arbitrary forms.
        let ctx = f4();
        for f in [
            fermat_cubic(&ctx),
            sziklai_curve(&ctx),
            quartic(&ctx),
        ] {
            let spec = f.line_spectrum();
            assert_eq!(spec.incidence_pairs(), 5 * f.count_points());
        }
    }

    #[test]
    fn partial_derivatives() {
        let ctx = f4();
        let cube = TernaryForm::from_terms(&ctx, 3, &[(3, 0, 0, Fe::ONE)]).unwrap();
        let [p0, p1, _] = cube.partials();
        // d(x0^3)/dx0 = 3 x0^2 = x0^2 in characteristic 2.
        assert_eq!(p0, TernaryPoly::monomial(2, 2, 0, Fe::ONE));
        assert!(p1.is_zero());
    }

    #[test]
    fn euler_relation_on_samples() {
        // sum_i x_i df/dx_i = d * f, checked by evaluation everywhere.
        let ctx = f4();
        for f in [fermat_cubic(&ctx), sziklai_curve(&ctx), quartic(&ctx)] {
            let d_scalar = ctx.elem_from_int(f.degree() as u64);
            let parts = f.partials();
            let mut lhs = TernaryPoly::zero(f.degree());
            for (i, p) in parts.iter().enumerate() {
                let (e0, e1) = match i {
                    0 => (1, 0),
                    1 => (0, 1),
                    _ => (0, 0),
                };
                let xi = TernaryPoly::monomial(1, e0, e1, Fe::ONE);
                lhs = lhs.add(&ctx, &xi.mul(&ctx, p));
            }
            let rhs = f.as_poly().scale(&ctx, d_scalar);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn tangent_line_examples() {
        let ctx = f4();
        let fermat = fermat_cubic(&ctx);
        let p = Point::new(&ctx, [Fe::ZERO, Fe::ONE, Fe::ONE]).unwrap();
        let t = fermat.tangent_line(&p).unwrap();
        // Partials (x0^2, x1^2, x2^2) at (0,1,1) give the line x1 + x2 = 0.
        assert_eq!(t.coeffs(), [Fe::ZERO, Fe::ONE, Fe::ONE]);
        // Multiplicity at least 2 at every rational point of both cubics.
        for f in [&fermat, &sziklai_curve(&ctx)] {
            for p in f.rational_points() {
                let t = f.tangent_line(&p).unwrap();
                assert!(f.intersection_multiplicity(&t, &p).unwrap() >= 2);
            }
        }
        let off = Point::new(&ctx, [Fe::ONE, Fe::ZERO, Fe::ZERO]).unwrap();
        assert_eq!(fermat.tangent_line(&off).unwrap_err(), Error::PointNotOnCurve);
    }

    #[test]
    fn tangent_is_the_unique_line_with_higher_contact() {
        let ctx = f4();
        let lines = plane::enumerate_lines(&ctx);
        for f in [fermat_cubic(&ctx), sziklai_curve(&ctx)] {
            for p in f.rational_points() {
                let tangent = f.tangent_line(&p).unwrap();
                for l in &lines {
                    if !plane::incident(&ctx, l, &p) {
                        continue;
                    }
                    let m = f.intersection_multiplicity(l, &p).unwrap();
                    if *l == tangent {
                        assert!(m >= 2);
                    } else {
                        assert_eq!(m, 1);
                    }
                }
            }
        }
    }

    #[test]
    fn intersection_multiplicity_examples() {
        let ctx = f4();
        let fermat = fermat_cubic(&ctx);
        let l = Line::new(&ctx, [Fe::ZERO, Fe::ONE, Fe::ONE]).unwrap();
        let p = Point::new(&ctx, [Fe::ZERO, Fe::ONE, Fe::ONE]).unwrap();
        assert_eq!(fermat.intersection_multiplicity(&l, &p).unwrap(), 3);
        // A point of l off the curve has multiplicity 0.
        let p0 = Point::new(&ctx, [Fe::ONE, Fe::ZERO, Fe::ZERO]).unwrap();
        assert_eq!(fermat.intersection_multiplicity(&l, &p0).unwrap(), 0);
        // Not on the line: error.
        let p1 = Point::new(&ctx, [Fe::ONE, Fe::ONE, Fe::ZERO]).unwrap();
        assert_eq!(
            fermat.intersection_multiplicity(&l, &p1).unwrap_err(),
            Error::PointNotOnLine
        );
        // Line dividing the form: reported as a component.
        let f = TernaryForm::from_terms(&ctx, 3, &[(3, 0, 0, Fe::ONE), (1, 1, 1, Fe::ONE)])
            .unwrap();
        let x0 = Line::new(&ctx, [Fe::ONE, Fe::ZERO, Fe::ZERO]).unwrap();
        let on_x0 = Point::new(&ctx, [Fe::ZERO, Fe::ONE, Fe::ZERO]).unwrap();
        assert_eq!(
            f.intersection_multiplicity(&x0, &on_x0).unwrap_err(),
            Error::LineIsComponent
        );
    }

    #[test]
    fn multiplicities_on_a_line_sum_to_at_most_d() {
        let ctx = f4();
        for f in [fermat_cubic(&ctx), sziklai_curve(&ctx), quartic(&ctx)] {
            for l in plane::enumerate_lines(&ctx) {
                let total: usize = plane::points_on_line(&ctx, &l)
                    .iter()
                    .map(|p| f.intersection_multiplicity(&l, p).unwrap())
                    .sum();
                assert!(total <= f.degree());
            }
        }
    }

    #[test]
    fn flex_examples() {
        let ctx = f4();
        assert_eq!(fermat_cubic(&ctx).flexes().unwrap().len(), 9);
        assert!(sziklai_curve(&ctx).flexes().unwrap().is_empty());
    }

    #[test]
    fn smoothness() {
        let ctx = f4();
        assert!(fermat_cubic(&ctx).is_smooth().unwrap());
        assert!(sziklai_curve(&ctx).is_smooth().unwrap());
        // x0^3 + x1^3 = (x0 + x1)(x0^2 + x0 x1 + x1^2) is singular at (0:0:1).
        let f = TernaryForm::from_terms(&ctx, 3, &[(3, 0, 0, Fe::ONE), (0, 3, 0, Fe::ONE)])
            .unwrap();
        assert!(!f.is_smooth().unwrap());
        // Degree out of range.
        let quintic = TernaryForm::from_terms(&ctx, 5, &[(5, 0, 0, Fe::ONE)]).unwrap();
        assert_eq!(
            quintic.is_smooth().unwrap_err(),
            Error::UnsupportedDegree(5)
        );
    }

    #[test]
    fn singularity_detection_is_coordinate_free() {
        // Moving a cusp around the plane (including onto points with
        // generator coordinates) must not fool the smoothness search.
        let ctx = f4();
        let cuspidal =
            TernaryForm::from_terms(&ctx, 3, &[(3, 0, 0, Fe::ONE), (0, 2, 1, Fe::ONE)]).unwrap();
        let checker = SmoothChecker::new(&ctx, 3).unwrap();
        assert!(!checker.is_smooth(&cuspidal));
        let maps = crate::groups::pgl_enumerate(&ctx).unwrap();
        for idx in [0usize, 7_777, 23_456, 40_123, 59_999] {
            let moved = crate::groups::act_on_form(&maps[idx], &cuspidal);
            assert!(!checker.is_smooth(&moved), "map index {idx}");
        }
    }

    #[test]
    fn bound_values() {
        assert_eq!(bounds(3, 4).unwrap(), (9, 9));
        assert_eq!(bounds(3, 16).unwrap(), (25, 33));
        // Non-square q: the square root is taken as a real and floored.
        assert_eq!(bounds(3, 5).unwrap(), (10, 11));
        assert_eq!(bounds(1, 7).unwrap_err(), Error::UnsupportedDegree(1));
    }

    #[test]
    fn vanishing_space_examples() {
        // On (F_q*)^2 with max_deg = q-1 the space is spanned by
        // x^{q-1} - 1 and y^{q-1} - 1.
        let f3 = FieldCtx::new(3, 1).unwrap();
        let pts: Vec<(Fe, Fe)> = f3
            .nonzero_elements()
            .flat_map(|x| f3.nonzero_elements().map(move |y| (x, y)))
            .collect();
        let basis = vanishing_space(&f3, &pts, 2);
        assert_eq!(basis.dimension(), 2);
        let idx = |i, j| basis.monomials.iter().position(|&m| m == (i, j)).unwrap();
        let minus_one = f3.neg(Fe::ONE);
        // First row: x^2 - 1.
        assert_eq!(basis.rows[0][idx(2, 0)], Fe::ONE);
        assert_eq!(basis.rows[0][idx(0, 0)], minus_one);
        assert!(basis.rows[0].iter().filter(|c| !c.is_zero()).count() == 2);
        // Second row: y^2 - 1.
        assert_eq!(basis.rows[1][idx(0, 2)], Fe::ONE);
        assert_eq!(basis.rows[1][idx(0, 0)], minus_one);
        assert!(basis.rows[1].iter().filter(|c| !c.is_zero()).count() == 2);
        assert_eq!(basis.format_row(&f3, 0), "x^2 + g^1");

        let f4 = FieldCtx::new(2, 2).unwrap();
        let pts4: Vec<(Fe, Fe)> = f4
            .nonzero_elements()
            .flat_map(|x| f4.nonzero_elements().map(move |y| (x, y)))
            .collect();
        assert_eq!(vanishing_space(&f4, &pts4, 3).dimension(), 2);

        // No constraints: the whole degree <= 1 space.
        assert_eq!(vanishing_space(&f3, &[], 1).dimension(), 3);
    }

    #[test]
    fn text_round_trip() {
        let ctx = f4();
        let f = sziklai_curve(&ctx);
        assert_eq!(f.to_text(), "x0^3 + g^1*x1^3 + g^2*x2^3");
        assert_eq!(parse_form(&ctx, &f.to_text()).unwrap(), f);
        assert_eq!(parse_form(&ctx, &f.to_raw_text()).unwrap(), f);
        assert_eq!(
            parse_form(&ctx, "x0^3 + w*x1^3 + w2*x2^3").unwrap(),
            f
        );
        // Non-homogeneous input is rejected.
        assert!(matches!(
            parse_form(&ctx, "x0^2 + x1^3").unwrap_err(),
            Error::Parse { .. }
        ));
        // Mixed-degree raw vectors are rejected by length.
        assert!(parse_form(&ctx, "q=4 d=3 coeffs=[1,0]").is_err());
        assert!(parse_form(&ctx, "q=8 d=3 coeffs=[1]").is_err());
    }
}
