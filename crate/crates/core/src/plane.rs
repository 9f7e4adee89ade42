//! Points and lines of the projective plane over F_q.
//!
//! Both are stored as homogeneous triples normalized so the first nonzero
//! coordinate is 1, which makes equality and hashing structural. Enumeration
//! order is lexicographic on the normalized triples (by element handle), so
//! every derived report is reproducible.

use crate::error::{Error, Result};
use crate::gf::{Fe, FieldCtx};

/// A point of P^2(F_q), normalized.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Point(pub [Fe; 3]);

/// A line of P^2(F_q), stored by the coefficients of its linear form,
/// normalized the same way. A point P lies on l iff the dot product of the
/// two triples vanishes.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Line(pub [Fe; 3]);

fn normalize(ctx: &FieldCtx, mut c: [Fe; 3]) -> Result<[Fe; 3]> {
    let lead = c.iter().position(|x| !x.is_zero()).ok_or(Error::ZeroForm)?;
    if c[lead] != Fe::ONE {
        let scale = ctx.inv(c[lead])?;
        for x in &mut c {
            *x = ctx.mul(*x, scale);
        }
    }
    Ok(c)
}

impl Point {
    pub fn new(ctx: &FieldCtx, coords: [Fe; 3]) -> Result<Point> {
        Ok(Point(normalize(ctx, coords)?))
    }

    pub fn coords(&self) -> [Fe; 3] {
        self.0
    }

    pub fn format(&self, ctx: &FieldCtx) -> String {
        format_triple(ctx, &self.0)
    }
}

impl Line {
    pub fn new(ctx: &FieldCtx, coeffs: [Fe; 3]) -> Result<Line> {
        Ok(Line(normalize(ctx, coeffs)?))
    }

    pub fn coeffs(&self) -> [Fe; 3] {
        self.0
    }

    pub fn format(&self, ctx: &FieldCtx) -> String {
        format_triple(ctx, &self.0)
    }
}

fn format_triple(ctx: &FieldCtx, c: &[Fe; 3]) -> String {
    format!(
        "({}:{}:{})",
        ctx.format_elem(c[0]),
        ctx.format_elem(c[1]),
        ctx.format_elem(c[2])
    )
}

/// All normalized triples in lexicographic order: (0:0:1), then (0:1:*),
/// then (1:*:*). Exactly q^2 + q + 1 of them.
fn enumerate_triples(ctx: &FieldCtx) -> Vec<[Fe; 3]> {
    let q = ctx.q() as u16;
    let mut out = Vec::with_capacity((q as usize) * (q as usize) + q as usize + 1);
    out.push([Fe::ZERO, Fe::ZERO, Fe::ONE]);
    for t in 0..q {
        out.push([Fe::ZERO, Fe::ONE, Fe(t)]);
    }
    for s in 0..q {
        for t in 0..q {
            out.push([Fe::ONE, Fe(s), Fe(t)]);
        }
    }
    out
}

pub fn enumerate_points(ctx: &FieldCtx) -> Vec<Point> {
    enumerate_triples(ctx).into_iter().map(Point).collect()
}

pub fn enumerate_lines(ctx: &FieldCtx) -> Vec<Line> {
    enumerate_triples(ctx).into_iter().map(Line).collect()
}

#[inline]
pub fn incident(ctx: &FieldCtx, l: &Line, p: &Point) -> bool {
    let mut acc = Fe::ZERO;
    for i in 0..3 {
        acc = ctx.add(acc, ctx.mul(l.0[i], p.0[i]));
    }
    acc.is_zero()
}

/// The unique line through two distinct points (cross product of the
/// coordinate triples).
pub fn line_through(ctx: &FieldCtx, p: &Point, q: &Point) -> Result<Line> {
    if p == q {
        return Err(Error::CoincidentPoints);
    }
    let a = p.0;
    let b = q.0;
    let cross = [
        ctx.sub(ctx.mul(a[1], b[2]), ctx.mul(a[2], b[1])),
        ctx.sub(ctx.mul(a[2], b[0]), ctx.mul(a[0], b[2])),
        ctx.sub(ctx.mul(a[0], b[1]), ctx.mul(a[1], b[0])),
    ];
    Line::new(ctx, cross)
}

/// The intersection point of two distinct lines (dual cross product).
pub fn meet(ctx: &FieldCtx, l: &Line, m: &Line) -> Result<Point> {
    if l == m {
        return Err(Error::CoincidentPoints);
    }
    let a = l.0;
    let b = m.0;
    let cross = [
        ctx.sub(ctx.mul(a[1], b[2]), ctx.mul(a[2], b[1])),
        ctx.sub(ctx.mul(a[2], b[0]), ctx.mul(a[0], b[2])),
        ctx.sub(ctx.mul(a[0], b[1]), ctx.mul(a[1], b[0])),
    ];
    Point::new(ctx, cross)
}

/// The q+1 points incident with a line, in enumeration order.
pub fn points_on_line(ctx: &FieldCtx, l: &Line) -> Vec<Point> {
    enumerate_points(ctx)
        .into_iter()
        .filter(|p| incident(ctx, l, p))
        .collect()
}

/// Two distinct points A, B on l such that sA + tB over (s:t) in P^1(F_q)
/// enumerates the q+1 points of l without repetition. Deterministically the
/// first two points of l in enumeration order.
pub fn parameterize_line(ctx: &FieldCtx, l: &Line) -> (Point, Point) {
    let mut found = Vec::with_capacity(2);
    for triple in enumerate_triples(ctx) {
        let p = Point(triple);
        if incident(ctx, l, &p) {
            found.push(p);
            if found.len() == 2 {
                break;
            }
        }
    }
    (found[0], found[1])
}

/// Linear combination sA + tB, normalized.
pub fn combine(ctx: &FieldCtx, s: Fe, a: &Point, t: Fe, b: &Point) -> Result<Point> {
    let c = std::array::from_fn(|i| ctx.add(ctx.mul(s, a.0[i]), ctx.mul(t, b.0[i])));
    Point::new(ctx, c)
}

/// The normalized representatives of P^1(F_q): (0:1) then (1:t).
pub fn projective_line_params(ctx: &FieldCtx) -> Vec<(Fe, Fe)> {
    let mut out = Vec::with_capacity(ctx.q() as usize + 1);
    out.push((Fe::ZERO, Fe::ONE));
    for t in 0..ctx.q() as u16 {
        out.push((Fe::ONE, Fe(t)));
    }
    out
}

/// Precomputed incidence structure: every line with the indices of its
/// incident points. Built once and shared by the heavier scans.
pub struct Incidence {
    pub points: Vec<Point>,
    pub lines: Vec<Line>,
    /// For each line index, the indices of its q+1 points.
    pub on_line: Vec<Vec<usize>>,
}

impl Incidence {
    pub fn new(ctx: &FieldCtx) -> Incidence {
        let points = enumerate_points(ctx);
        let lines = enumerate_lines(ctx);
        let on_line = lines
            .iter()
            .map(|l| {
                points
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| incident(ctx, l, p))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        Incidence {
            points,
            lines,
            on_line,
        }
    }
}
