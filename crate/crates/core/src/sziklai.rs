//! The family S_q of degree-(q-1) curves a x0^{q-1} + b x1^{q-1} + c x2^{q-1}
//! with abc != 0 and a + b + c = 0: membership tests, the S3 action on
//! coefficient triples, fixed-point counts, and the number of projective
//! equivalence classes nu_q computed both by the closed case formulas and by
//! a direct Burnside orbit count.

use crate::error::{Error, Result};
use crate::forms::TernaryForm;
use crate::gf::{Fe, FieldCtx};
use crate::groups::{self, PglAction};
use crate::plane;
use std::sync::Arc;

/// A projective coefficient triple (1 : beta : gamma) with all entries
/// nonzero and 1 + beta + gamma = 0, identifying a member of S_q.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SziklaiTriple {
    pub alpha: Fe,
    pub beta: Fe,
    pub gamma: Fe,
}

impl SziklaiTriple {
    pub fn new(ctx: &FieldCtx, alpha: Fe, beta: Fe, gamma: Fe) -> Result<SziklaiTriple> {
        if alpha.is_zero() || beta.is_zero() || gamma.is_zero() {
            return Err(Error::Inconsistency(
                "triple entries must all be nonzero".to_string(),
            ));
        }
        if !ctx.add(ctx.add(alpha, beta), gamma).is_zero() {
            return Err(Error::Inconsistency(
                "triple entries must sum to zero".to_string(),
            ));
        }
        // Projective normalization: alpha = 1 (alpha is never zero).
        let scale = ctx.inv(alpha)?;
        Ok(SziklaiTriple {
            alpha: Fe::ONE,
            beta: ctx.mul(beta, scale),
            gamma: ctx.mul(gamma, scale),
        })
    }

    pub fn format(&self, ctx: &FieldCtx) -> String {
        format!(
            "({}:{}:{})",
            ctx.format_elem(self.alpha),
            ctx.format_elem(self.beta),
            ctx.format_elem(self.gamma)
        )
    }
}

/// A point (alpha : beta) of P^1 minus {(0:1), (1:0), (1:-1)}, the image of
/// the family under the coefficient map. Both coordinates and their sum are
/// nonzero; normalized with alpha = 1.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RhoPoint {
    pub a: Fe,
    pub b: Fe,
}

impl RhoPoint {
    fn normalized(ctx: &FieldCtx, a: Fe, b: Fe) -> RhoPoint {
        debug_assert!(!a.is_zero() && !b.is_zero() && !ctx.add(a, b).is_zero());
        let scale = ctx.inv(a).unwrap();
        RhoPoint {
            a: Fe::ONE,
            b: ctx.mul(b, scale),
        }
    }
}

/// All members of S_q, in lexicographic order of their triples. Exactly
/// q - 2 of them; empty for q = 2.
pub fn family_members(ctx: &FieldCtx) -> Vec<SziklaiTriple> {
    let mut out = Vec::new();
    for beta in ctx.nonzero_elements() {
        let gamma = ctx.neg(ctx.add(Fe::ONE, beta));
        if gamma.is_zero() {
            continue;
        }
        out.push(SziklaiTriple {
            alpha: Fe::ONE,
            beta,
            gamma,
        });
    }
    out.sort();
    out
}

/// The degree-(q-1) form alpha x0^{q-1} + beta x1^{q-1} + gamma x2^{q-1}.
pub fn to_form(ctx: &Arc<FieldCtx>, t: &SziklaiTriple) -> TernaryForm {
    let d = (ctx.q() - 1) as usize;
    TernaryForm::from_terms(
        ctx,
        d,
        &[
            (d, 0, 0, t.alpha),
            (0, d, 0, t.beta),
            (0, 0, d, t.gamma),
        ],
    )
    .expect("family forms are nonzero")
}

/// Membership by the complement characterization: the rational point set is
/// exactly the plane minus the three coordinate lines. Cross-checked against
/// the coefficient pattern; a mismatch would mean a broken invariant and is
/// reported as an internal error.
pub fn is_sziklai(f: &TernaryForm) -> Result<bool> {
    let ctx = f.ctx();
    let d = (ctx.q() - 1) as usize;
    if f.degree() != d {
        return Err(Error::DegreeMismatch {
            expected: d,
            found: f.degree(),
        });
    }
    let by_points = membership_by_points(f);
    let by_coeffs = membership_by_coefficients(f);
    if by_points != by_coeffs {
        return Err(Error::Inconsistency(format!(
            "complement characterization ({by_points}) disagrees with the coefficient pattern \
             ({by_coeffs}) for {f:?}"
        )));
    }
    Ok(by_points)
}

/// The point-set route: C(F_q) = P^2(F_q) minus the coordinate triangle.
pub fn membership_by_points(f: &TernaryForm) -> bool {
    let ctx = f.ctx();
    plane::enumerate_points(ctx).iter().all(|p| {
        let on_triangle = p.coords().iter().any(|c| c.is_zero());
        f.evaluate(p).is_zero() != on_triangle
    })
}

/// The coefficient route: exactly the three pure-power monomials, nonzero,
/// summing to zero.
pub fn membership_by_coefficients(f: &TernaryForm) -> bool {
    let ctx = f.ctx();
    let d = f.degree();
    let coeffs = f.coeffs();
    let idx = |e0: usize, e1: usize| crate::forms::monomial_index(d, e0, e1);
    let (a, b, c) = (coeffs[idx(d, 0)], coeffs[idx(0, d)], coeffs[idx(0, 0)]);
    if a.is_zero() || b.is_zero() || c.is_zero() {
        return false;
    }
    if !ctx.add(ctx.add(a, b), c).is_zero() {
        return false;
    }
    let pure = [idx(d, 0), idx(0, d), idx(0, 0)];
    coeffs
        .iter()
        .enumerate()
        .all(|(i, cf)| pure.contains(&i) || cf.is_zero())
}

/// The six permutations, indexed in the fixed order (1), (1,2), (2,3),
/// (1,3), (1,2,3), (1,3,2).
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum S3 {
    Id,
    Swap12,
    Swap23,
    Swap13,
    Cycle123,
    Cycle132,
}

impl S3 {
    pub const ALL: [S3; 6] = [
        S3::Id,
        S3::Swap12,
        S3::Swap23,
        S3::Swap13,
        S3::Cycle123,
        S3::Cycle132,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            S3::Id => "(1)",
            S3::Swap12 => "(1,2)",
            S3::Swap23 => "(2,3)",
            S3::Swap13 => "(1,3)",
            S3::Cycle123 => "(1,2,3)",
            S3::Cycle132 => "(1,3,2)",
        }
    }

    /// Permute a coefficient triple.
    pub fn apply_to_triple(&self, ctx: &FieldCtx, t: &SziklaiTriple) -> SziklaiTriple {
        let (a, b, c) = (t.alpha, t.beta, t.gamma);
        let (a, b, c) = match self {
            S3::Id => (a, b, c),
            S3::Swap12 => (b, a, c),
            S3::Swap23 => (a, c, b),
            S3::Swap13 => (c, b, a),
            S3::Cycle123 => (c, a, b),
            S3::Cycle132 => (b, c, a),
        };
        SziklaiTriple::new(ctx, a, b, c).expect("permutations preserve the triple invariants")
    }
}

/// The induced action on (alpha : beta), using gamma = -(alpha + beta).
pub fn s3_act(ctx: &FieldCtx, perm: S3, r: &RhoPoint) -> RhoPoint {
    let (a, b) = (r.a, r.b);
    let neg_sum = ctx.neg(ctx.add(a, b));
    let (na, nb) = match perm {
        S3::Id => (a, b),
        S3::Swap12 => (b, a),
        S3::Swap23 => (a, neg_sum),
        S3::Swap13 => (neg_sum, b),
        S3::Cycle123 => (neg_sum, a),
        S3::Cycle132 => (b, neg_sum),
    };
    RhoPoint::normalized(ctx, na, nb)
}

/// The q - 2 points of image rho, sorted.
pub fn image_rho(ctx: &FieldCtx) -> Vec<RhoPoint> {
    family_members(ctx)
        .iter()
        .map(|t| RhoPoint {
            a: Fe::ONE,
            b: t.beta,
        })
        .collect()
}

pub fn rho_of(t: &SziklaiTriple) -> RhoPoint {
    RhoPoint {
        a: t.alpha,
        b: t.beta,
    }
}

pub fn triple_of_rho(ctx: &FieldCtx, r: &RhoPoint) -> SziklaiTriple {
    let gamma = ctx.neg(ctx.add(r.a, r.b));
    SziklaiTriple::new(ctx, r.a, r.b, gamma).expect("rho points satisfy the triple invariants")
}

/// Case labels of the classification by characteristic and q mod 3.
pub fn case_label(p: u32, q: u32) -> &'static str {
    if p == 3 {
        "II"
    } else if p == 2 {
        if q % 3 == 2 {
            "III-i"
        } else {
            "III-ii"
        }
    } else if q % 3 == 2 {
        "I-i"
    } else {
        "I-ii"
    }
}

/// Number of fixed points of each permutation on image rho, by direct
/// enumeration, in the fixed order of [`S3::ALL`].
pub fn fixed_point_row(ctx: &FieldCtx) -> [usize; 6] {
    let items = image_rho(ctx);
    let mut out = [0usize; 6];
    for (i, perm) in S3::ALL.iter().enumerate() {
        out[i] = items
            .iter()
            .filter(|r| s3_act(ctx, *perm, r) == **r)
            .count();
    }
    out
}

/// The fixed-point row the case analysis predicts.
pub fn expected_fixed_point_row(p: u32, q: u32) -> [usize; 6] {
    let qm2 = (q - 2) as usize;
    match case_label(p, q) {
        "I-i" => [qm2, 1, 1, 1, 0, 0],
        "I-ii" => [qm2, 1, 1, 1, 2, 2],
        "II" => [qm2, 1, 1, 1, 1, 1],
        "III-i" => [qm2, 0, 0, 0, 0, 0],
        _ => [qm2, 0, 0, 0, 2, 2], // III-ii
    }
}

/// nu_q by the closed five-case formula.
#[allow(clippy::manual_div_ceil)]
pub fn nu_formula(q: u64) -> Result<u64> {
    let (p, _n) = crate::gf::prime_power(q)?;
    Ok(if p == 3 {
        (q + 3) / 6
    } else if p == 2 {
        if q % 3 == 2 {
            (q - 2) / 6
        } else {
            (q + 2) / 6
        }
    } else if q % 3 == 2 {
        (q + 1) / 6
    } else {
        (q + 5) / 6
    })
}

/// nu_q by a direct Burnside orbit count of S3 on image rho. Zero at q = 2,
/// where the family is empty.
pub fn nu_direct(ctx: &FieldCtx) -> Result<u64> {
    let items = image_rho(ctx);
    let orbits = groups::burnside_count(&S3::ALL, &items, |perm, r| s3_act(ctx, *perm, r))?;
    Ok(orbits.count as u64)
}

/// Orbit representatives (lexicographically least triples) of S_q under
/// coefficient permutation.
pub fn classify(ctx: &FieldCtx) -> Result<Vec<SziklaiTriple>> {
    let items = image_rho(ctx);
    let orbits = groups::burnside_count(&S3::ALL, &items, |perm, r| s3_act(ctx, *perm, r))?;
    Ok(orbits
        .representatives
        .iter()
        .map(|r| triple_of_rho(ctx, r))
        .collect())
}

/// The orbit partition as (representative, members) pairs.
pub fn classify_orbits(ctx: &FieldCtx) -> Result<Vec<(SziklaiTriple, Vec<SziklaiTriple>)>> {
    let reps = classify(ctx)?;
    let mut out: Vec<(SziklaiTriple, Vec<SziklaiTriple>)> =
        reps.into_iter().map(|r| (r, Vec::new())).collect();
    for t in family_members(ctx) {
        let r = rho_of(&t);
        let mut orbit_min = t;
        for perm in S3::ALL {
            let img = triple_of_rho(ctx, &s3_act(ctx, perm, &r));
            if img < orbit_min {
                orbit_min = img;
            }
        }
        let slot = out
            .iter_mut()
            .find(|(rep, _)| *rep == orbit_min)
            .expect("every member's orbit minimum is a representative");
        slot.1.push(t);
    }
    Ok(out)
}

/// Cross-check that projective equivalence of the forms agrees exactly with
/// S3-orbit equality, by full PGL enumeration. Only for q within the
/// enumeration range.
pub fn classify_pgl_crosscheck(ctx: &Arc<FieldCtx>) -> Result<()> {
    let members = family_members(ctx);
    if members.is_empty() {
        return Ok(());
    }
    let action = PglAction::new(ctx, (ctx.q() - 1) as usize)?;
    let orbit_min = |t: &SziklaiTriple| {
        let r = rho_of(t);
        S3::ALL
            .iter()
            .map(|perm| triple_of_rho(ctx, &s3_act(ctx, *perm, &r)))
            .min()
            .unwrap()
    };
    for (i, s) in members.iter().enumerate() {
        for t in &members[i..] {
            let same_orbit = orbit_min(s) == orbit_min(t);
            let equivalent = action
                .are_equivalent(&to_form(ctx, s), &to_form(ctx, t))
                .is_some();
            if same_orbit != equivalent {
                return Err(Error::Inconsistency(format!(
                    "S3 orbits and PGL equivalence disagree on {} vs {}",
                    s.format(ctx),
                    t.format(ctx)
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::fermat_cubic;

    fn ctx_q(p: u32, n: u32) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(p, n).unwrap())
    }

    #[test]
    fn family_sizes() {
        assert!(family_members(&ctx_q(2, 1)).is_empty());
        let f4 = ctx_q(2, 2);
        let members = family_members(&f4);
        let w = f4.generator();
        let w2 = f4.mul(w, w);
        assert_eq!(members.len(), 2);
        assert_eq!(members[0], SziklaiTriple::new(&f4, Fe::ONE, w, w2).unwrap());
        assert_eq!(members[1], SziklaiTriple::new(&f4, Fe::ONE, w2, w).unwrap());
        assert_eq!(family_members(&ctx_q(5, 1)).len(), 3);
    }

    #[test]
    fn forms_of_members() {
        let f4 = ctx_q(2, 2);
        let w = f4.generator();
        let t = SziklaiTriple::new(&f4, Fe::ONE, w, f4.mul(w, w)).unwrap();
        let f = to_form(&f4, &t);
        assert_eq!(f.to_text(), "x0^3 + g^1*x1^3 + g^2*x2^3");
        // Point counts and spectra for small q.
        for (p, n) in [(3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
            let ctx = ctx_q(p, n);
            let q = ctx.q() as usize;
            for t in family_members(&ctx) {
                let f = to_form(&ctx, &t);
                assert_eq!(f.count_points(), (q - 1) * (q - 1));
                let spec = f.line_spectrum();
                assert_eq!(spec.count(0), 3);
                assert_eq!(spec.count(q - 2), (q - 1) * (q - 1));
                assert_eq!(spec.count(q - 1), 3 * (q - 1));
            }
        }
    }

    #[test]
    fn membership_routes() {
        let f4 = ctx_q(2, 2);
        let w = f4.generator();
        let t = SziklaiTriple::new(&f4, Fe::ONE, w, f4.mul(w, w)).unwrap();
        assert!(is_sziklai(&to_form(&f4, &t)).unwrap());
        // The Fermat cubic has points on the coordinate lines.
        assert!(!is_sziklai(&fermat_cubic(&f4)).unwrap());
        // 1 + 1 + 1 = 0 over F_3.
        let f3 = ctx_q(3, 1);
        let ones = SziklaiTriple::new(&f3, Fe::ONE, Fe::ONE, Fe::ONE).unwrap();
        assert!(is_sziklai(&to_form(&f3, &ones)).unwrap());
        // Degree mismatch rejected.
        assert!(is_sziklai(&fermat_cubic(&ctx_q(2, 3))).is_err());
    }

    #[test]
    fn s3_action_examples() {
        let f4 = ctx_q(2, 2);
        let w = f4.generator();
        let w2 = f4.mul(w, w);
        let r = RhoPoint { a: Fe::ONE, b: w };
        // (1,2): (1:w) -> (w:1) = (1:w^2).
        assert_eq!(s3_act(&f4, S3::Swap12, &r), RhoPoint { a: Fe::ONE, b: w2 });
        // (1,2,3): (1:w) -> (-(1+w):1) = (w^2:1) = (1:w), a fixed point.
        assert_eq!(s3_act(&f4, S3::Cycle123, &r), r);
        for r in image_rho(&f4) {
            assert_eq!(s3_act(&f4, S3::Id, &r), r);
        }
    }

    #[test]
    fn rho_action_matches_triple_permutation() {
        for (p, n) in [(2, 2), (5, 1), (7, 1), (3, 2)] {
            let ctx = ctx_q(p, n);
            for t in family_members(&ctx) {
                for perm in S3::ALL {
                    let via_triple = rho_of(&perm.apply_to_triple(&ctx, &t));
                    let via_rho = s3_act(&ctx, perm, &rho_of(&t));
                    assert_eq!(via_triple, via_rho);
                }
            }
        }
    }

    #[test]
    fn fixed_point_rows() {
        for (p, n, expected) in [
            (2, 2, [2, 0, 0, 0, 2, 2]),
            (5, 1, [3, 1, 1, 1, 0, 0]),
            (3, 2, [7, 1, 1, 1, 1, 1]),
        ] {
            let ctx = ctx_q(p, n);
            assert_eq!(fixed_point_row(&ctx), expected);
            assert_eq!(expected_fixed_point_row(p, ctx.q()), expected);
        }
    }

    #[test]
    fn nu_values() {
        let cases: [(u64, u64); 11] = [
            (2, 0),
            (3, 1),
            (4, 1),
            (5, 1),
            (7, 2),
            (8, 1),
            (9, 2),
            (11, 2),
            (13, 3),
            (16, 3),
            (25, 5),
        ];
        for (q, nu) in cases {
            assert_eq!(nu_formula(q).unwrap(), nu, "q = {q}");
        }
        assert_eq!(nu_formula(27).unwrap(), 5);
        assert!(nu_formula(6).is_err());
        assert!(nu_formula(12).is_err());
    }

    #[test]
    fn direct_count_agrees_with_formula() {
        for (p, n) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (3, 3), (5, 2)] {
            let ctx = ctx_q(p, n);
            assert_eq!(
                nu_direct(&ctx).unwrap(),
                nu_formula(ctx.q() as u64).unwrap(),
                "q = {}",
                ctx.q()
            );
        }
    }

    #[test]
    fn classification_representatives() {
        let f4 = ctx_q(2, 2);
        let orbits = classify_orbits(&f4).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].1.len(), 2);
        assert_eq!(classify(&ctx_q(5, 1)).unwrap().len(), 1);
        assert_eq!(classify(&ctx_q(7, 1)).unwrap().len(), 2);
        // Every member appears in exactly one orbit.
        let f7 = ctx_q(7, 1);
        let total: usize = classify_orbits(&f7)
            .unwrap()
            .iter()
            .map(|(_, m)| m.len())
            .sum();
        assert_eq!(total, family_members(&f7).len());
    }

    #[test]
    fn pgl_equivalence_matches_s3_orbits() {
        // Full cross-check at q = 3 and q = 4: permutation of coefficients
        // is exactly projective equivalence within the family.
        for (p, n) in [(3, 1), (2, 2)] {
            classify_pgl_crosscheck(&ctx_q(p, n)).unwrap();
        }
    }

    #[test]
    fn membership_routes_agree_on_random_forms_q5() {
        // is_sziklai errors out internally if the complement and the
        // coefficient routes ever disagree; drive it over random quartics,
        // the real members, and near-miss perturbations.
        let ctx = ctx_q(5, 1);
        let d = 4usize;
        let ncoeffs = crate::forms::monomial_count(d);
        let mut members = 0;
        for t in family_members(&ctx) {
            assert!(is_sziklai(&to_form(&ctx, &t)).unwrap());
            members += 1;
        }
        assert_eq!(members, 3);
        // Perturbed members: add a cross monomial, or break the zero sum.
        for t in family_members(&ctx) {
            let f = to_form(&ctx, &t);
            let mut coeffs = f.coeffs().to_vec();
            coeffs[1] = Fe::ONE;
            let perturbed = TernaryForm::new(&ctx, d, coeffs).unwrap();
            assert!(!is_sziklai(&perturbed).unwrap());
            let mut coeffs = f.coeffs().to_vec();
            let last = ncoeffs - 1;
            coeffs[last] = ctx.add(coeffs[last], Fe::ONE);
            if let Ok(broken_sum) = TernaryForm::new(&ctx, d, coeffs) {
                assert!(!is_sziklai(&broken_sum).unwrap());
            }
        }
        // Deterministic random sample.
        let mut state = 0x1234_5678_9abc_def0u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut sampled = 0;
        while sampled < 2000 {
            let mut coeffs = vec![Fe::ZERO; ncoeffs];
            for c in coeffs.iter_mut() {
                *c = Fe((next() % 5) as u16);
            }
            let Ok(f) = TernaryForm::new(&ctx, d, coeffs) else {
                continue;
            };
            sampled += 1;
            is_sziklai(&f).unwrap();
        }
    }
}
