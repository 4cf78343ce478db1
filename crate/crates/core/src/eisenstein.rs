//! Triangle paths in the Eisenstein lattice `Z + ωZ` and their Farey labels.
//!
//! Points are stored in the `(m, n)` basis of `m + nω`. That basis map is
//! linear with positive determinant, so orientation tests can use the plain
//! integer cross product of coordinate pairs.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::companions::{gamma, Side};
use crate::error::{Error, Result};
use crate::forest::mu;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EisensteinPoint {
    pub m: i64,
    pub n: i64,
}

impl EisensteinPoint {
    pub const ORIGIN: EisensteinPoint = EisensteinPoint { m: 0, n: 0 };

    pub const fn new(m: i64, n: i64) -> Self {
        EisensteinPoint { m, n }
    }

    fn add(self, o: Self) -> Self {
        EisensteinPoint::new(self.m + o.m, self.n + o.n)
    }

    fn sub(self, o: Self) -> Self {
        EisensteinPoint::new(self.m - o.m, self.n - o.n)
    }

    fn scale(self, k: i64) -> Self {
        EisensteinPoint::new(self.m * k, self.n * k)
    }

    fn cross(self, o: Self) -> i64 {
        self.m * o.n - self.n * o.m
    }

    fn dot(self, o: Self) -> i64 {
        // only ever used for points on a common line through the origin,
        // where its sign and size relative to |D|^2 are basis independent
        self.m * o.m + self.n * o.n
    }
}

impl fmt::Display for EisensteinPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Up,
    Down,
}

/// `Up` at `z` is `{z, z+1, z+ω}`; `Down` at `z` is `{z+1, z+ω, z+1+ω}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticeTriangle {
    pub anchor: EisensteinPoint,
    pub orientation: Orientation,
}

impl LatticeTriangle {
    /// `τ_0 = [0, 1, ω]`.
    pub const FIRST: LatticeTriangle = LatticeTriangle {
        anchor: EisensteinPoint::ORIGIN,
        orientation: Orientation::Up,
    };

    pub fn vertices(&self) -> [EisensteinPoint; 3] {
        let z = self.anchor;
        let (one, omega) = (EisensteinPoint::new(1, 0), EisensteinPoint::new(0, 1));
        match self.orientation {
            Orientation::Up => [z, z.add(one), z.add(omega)],
            Orientation::Down => [z.add(one), z.add(omega), z.add(one).add(omega)],
        }
    }

    pub fn from_vertices(v: [EisensteinPoint; 3]) -> Option<Self> {
        let mut v = v;
        v.sort_by_key(|p| (p.m + p.n, p.m));
        let sums = v.map(|p| p.m + p.n);
        let t = if sums[1] == sums[0] + 1 {
            LatticeTriangle {
                anchor: v[0],
                orientation: Orientation::Up,
            }
        } else {
            LatticeTriangle {
                anchor: v[2].sub(EisensteinPoint::new(1, 1)),
                orientation: Orientation::Down,
            }
        };
        let mut want = t.vertices();
        want.sort_by_key(|p| (p.m + p.n, p.m));
        (want == v).then_some(t)
    }

    pub fn contains(&self, p: EisensteinPoint) -> bool {
        self.vertices().contains(&p)
    }

    pub fn translate(&self, by: EisensteinPoint) -> Self {
        LatticeTriangle {
            anchor: self.anchor.add(by),
            orientation: self.orientation,
        }
    }
}

/// Triangles in crossing order, starting with `τ_0`, and the lattice point
/// where the path ends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrianglePath {
    pub triangles: Vec<LatticeTriangle>,
    pub end: EisensteinPoint,
}

/// Walks the triangles crossed by a curve from 0 to `end` that follows the
/// segment, passing every lattice point in the open segment on its right
/// (`bend = 1`, a curve bent left) or left (`bend = -1`). `bend = 0` is the
/// straight segment, which must then avoid lattice points.
fn walk(end: EisensteinPoint, bend: i64) -> Result<TrianglePath> {
    let len2 = end.dot(end);
    let side = |v: EisensteinPoint| -> Result<i64> {
        let c = end.cross(v).signum();
        if c != 0 {
            return Ok(c);
        }
        let t = v.dot(end);
        let s = if t > 0 && t < len2 { -bend } else { bend };
        if s == 0 || t == 0 || t == len2 {
            return Err(Error::DegeneratePath(v.m, v.n));
        }
        Ok(s)
    };
    // sign of cross(u, D') where D' is the end direction turned by the bend
    let turned_cross = |u: EisensteinPoint| -> i64 {
        match u.cross(end).signum() {
            0 if u.dot(end) > 0 => bend,
            0 => -bend,
            c => c,
        }
    };
    const HEX: [EisensteinPoint; 6] = [
        EisensteinPoint::new(1, 0),
        EisensteinPoint::new(0, 1),
        EisensteinPoint::new(-1, 1),
        EisensteinPoint::new(-1, 0),
        EisensteinPoint::new(0, -1),
        EisensteinPoint::new(1, -1),
    ];
    let sector = (0..6)
        .find(|&i| turned_cross(HEX[i]) > 0 && turned_cross(HEX[(i + 1) % 6]) < 0)
        .ok_or(Error::DegeneratePath(end.m, end.n))?;
    let (mut u, mut v) = (HEX[sector], HEX[(sector + 1) % 6]);
    let start = LatticeTriangle::from_vertices([EisensteinPoint::ORIGIN, u, v]).unwrap();
    let mut triangles = vec![LatticeTriangle::FIRST];
    if start != LatticeTriangle::FIRST {
        triangles.push(start);
    }
    if u == end || v == end {
        return Ok(TrianglePath { triangles, end });
    }
    let mut opposite = EisensteinPoint::ORIGIN;
    let cap = 8 * (end.m.abs() + end.n.abs()) as usize + 16;
    for _ in 0..cap {
        let w = u.add(v).sub(opposite);
        triangles.push(LatticeTriangle::from_vertices([u, v, w]).unwrap());
        if w == end {
            return Ok(TrianglePath { triangles, end });
        }
        if side(w)? == side(u)? {
            opposite = u;
            u = w;
        } else {
            opposite = v;
            v = w;
        }
    }
    Err(Error::DegeneratePath(end.m, end.n))
}

fn coprime_pair(m: i64, n: i64) -> Result<()> {
    if m < 0 || n < 0 || m.gcd(&n) != 1 {
        return Err(Error::NotCoprime(m, n));
    }
    Ok(())
}

/// Triangles crossed by the open segment from 0 to `m + nω`.
pub fn segment_path(m: i64, n: i64) -> Result<TrianglePath> {
    coprime_pair(m, n)?;
    let end = EisensteinPoint::new(m, n);
    if LatticeTriangle::FIRST.contains(end) {
        return Ok(TrianglePath {
            triangles: vec![LatticeTriangle::FIRST],
            end,
        });
    }
    walk(end, 0)
}

/// Triangles crossed by the segment from 0 to `k(m + nω)` bent slightly so
/// that the terminal label is the `k`-th companion on `side` of `μ(n/m)`.
/// Right companions come from bending to the left of the direction of travel.
pub fn bent_path(m: i64, n: i64, k: i64, side: Side) -> Result<TrianglePath> {
    coprime_pair(m, n)?;
    if k < 2 {
        return Err(Error::CompanionIndex(k));
    }
    let bend = match side {
        Side::Right => 1,
        Side::Left => -1,
    };
    walk(EisensteinPoint::new(m, n).scale(k), bend)
}

/// Labels of every visited lattice point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledStrip {
    pub labels: BTreeMap<EisensteinPoint, Rational>,
    pub end: EisensteinPoint,
    /// How many new labels were Farey differences rather than Farey sums.
    /// Differences only arise when the path leaves `τ_0` backwards.
    pub differences: usize,
}

impl LabeledStrip {
    pub fn terminal(&self) -> &Rational {
        &self.labels[&self.end]
    }
}

type Lax = (BigInt, BigInt);

fn normalize((p, q): Lax) -> Lax {
    if q.is_negative() || (q.is_zero() && p.is_negative()) {
        (-p, -q)
    } else {
        (p, q)
    }
}

/// Farey labels: `τ_0` gets `1/0, 0/1, 1/1`; each further triangle's new
/// vertex gets the Farey neighbour of its shared edge other than the
/// previous triangle's third vertex (the mediant, when moving forward).
pub fn label_path(path: &TrianglePath) -> Result<LabeledStrip> {
    let first = path
        .triangles
        .first()
        .ok_or(Error::DisjointTriangles(0, 0))?;
    if *first != LatticeTriangle::FIRST {
        return Err(Error::DisjointTriangles(0, 0));
    }
    let mut lax: BTreeMap<EisensteinPoint, Lax> = BTreeMap::new();
    let b = |p: i64, q: i64| (BigInt::from(p), BigInt::from(q));
    lax.insert(EisensteinPoint::new(0, 0), b(1, 0));
    lax.insert(EisensteinPoint::new(1, 0), b(0, 1));
    lax.insert(EisensteinPoint::new(0, 1), b(1, 1));
    let mut differences = 0;
    for (i, pair) in path.triangles.windows(2).enumerate() {
        let (prev, cur) = (pair[0].vertices(), pair[1].vertices());
        let shared: Vec<EisensteinPoint> =
            cur.iter().copied().filter(|p| prev.contains(p)).collect();
        if shared.len() != 2 {
            return Err(Error::DisjointTriangles(i, i + 1));
        }
        let fresh = cur.iter().copied().find(|p| !shared.contains(p)).unwrap();
        let behind = prev.iter().copied().find(|p| !shared.contains(p)).unwrap();
        let (a, c) = (&lax[&shared[0]], &lax[&shared[1]]);
        let sum = normalize((&a.0 + &c.0, &a.1 + &c.1));
        let diff = normalize((&a.0 - &c.0, &a.1 - &c.1));
        let w = &lax[&behind];
        let label = if *w == diff {
            sum
        } else if *w == sum {
            differences += 1;
            diff
        } else {
            return Err(Error::NotFarey(i + 1));
        };
        if let Some(old) = lax.get(&fresh) {
            if *old != label {
                return Err(Error::NotFarey(i + 1));
            }
        }
        lax.insert(fresh, label);
    }
    if !lax.contains_key(&path.end) {
        return Err(Error::DegeneratePath(path.end.m, path.end.n));
    }
    let labels = lax
        .into_iter()
        .map(|(k, (p, q))| (k, Rational::new(p, q).unwrap()))
        .collect();
    Ok(LabeledStrip {
        labels,
        end: path.end,
        differences,
    })
}

/// Checks the terminal label against `μ(n/m)` or its `k`-th companion.
pub fn verify_snake(m: i64, n: i64, bent: Option<(i64, Side)>) -> Result<bool> {
    let base = mu(&Rational::new(n, m)?)?;
    let (path, want) = match bent {
        None => (segment_path(m, n)?, base),
        Some((k, side)) => (bent_path(m, n, k, side)?, gamma(&base, side, k)?),
    };
    Ok(*label_path(&path)?.terminal() == want)
}
