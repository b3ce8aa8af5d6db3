//! Walls of the moment hypercube [-1,1]^r, chamber location and the
//! axis-parallel dendrites that organize the iterated residues.
//!
//! A chamber is named by its pyramid: the facet hit by the first ray from
//! xi along the coordinate of largest magnitude. The finer cell also records
//! the ray directions inside the facet, and that is what the pairing
//! polynomial depends on.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::action::{build_weight_matrix, WeightMatrix};
use crate::algebra::Rational;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// Sign of a nonzero number; zero maps to `Plus`.
    pub fn of(x: &Rational) -> Sign {
        if x.is_negative() {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Hyperplane `<normal, x> = offset` spanned by at least two vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub normal: Vec<i64>,
    pub offset: Rational,
    /// 1-based column indices lying on the wall.
    pub vertex_set: Vec<usize>,
}

impl Wall {
    /// `<normal, xi> - offset`
    pub fn value(&self, xi: &[Rational]) -> Rational {
        let mut s = -self.offset.clone();
        for (n, x) in self.normal.iter().zip(xi) {
            if *n != 0 {
                s += x * Rational::from_integer((*n).into());
            }
        }
        s
    }

    pub fn value_f64(&self, xi: &[f64]) -> f64 {
        use num_traits::ToPrimitive;
        let s: f64 = self
            .normal
            .iter()
            .zip(xi)
            .map(|(&n, &x)| n as f64 * x)
            .sum();
        s - self.offset.to_f64().unwrap_or(f64::NAN)
    }

    /// A boundary facet x_i = +-1.
    pub fn is_facet(&self) -> bool {
        self.normal.iter().filter(|&&n| n != 0).count() == 1
    }

    /// x_i = +-x_j; these separate the pyramids and their cells.
    pub fn is_cell_wall(&self) -> bool {
        self.offset.is_zero() && self.normal.iter().filter(|&&n| n != 0).count() == 2
    }
}

impl fmt::Display for Wall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &n) in self.normal.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let mag = n.abs();
            let coef = if mag == 1 {
                String::new()
            } else {
                mag.to_string()
            };
            match (first, n < 0) {
                (true, false) => write!(f, "{coef}x{}", i + 1)?,
                (true, true) => write!(f, "-{coef}x{}", i + 1)?,
                (false, false) => write!(f, " + {coef}x{}", i + 1)?,
                (false, true) => write!(f, " - {coef}x{}", i + 1)?,
            }
            first = false;
        }
        write!(f, " = {}", self.offset)
    }
}

fn affine_dim(points: &[&[i64]]) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let base = points[0];
    let mut rows: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| {
            p.iter()
                .zip(base)
                .map(|(a, b)| Rational::from_integer((a - b).into()))
                .collect()
        })
        .collect();
    let ncols = base.len();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&k| !rows[k][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let p = rows[rank][col].clone();
        for k in 0..rows.len() {
            if k != rank && !rows[k][col].is_zero() {
                let f = &rows[k][col] / &p;
                for c in col..ncols {
                    let d = &rows[rank][c] * &f;
                    rows[k][c] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// All codimension-one walls (boundary facets and interior walls), sorted
/// by normal then offset.
pub fn enumerate_walls(a: &WeightMatrix) -> Vec<Wall> {
    let cols = a.columns();
    let mut dirs: Vec<Vec<i64>> = Vec::new();
    for (k, u) in cols.iter().enumerate() {
        for v in &cols[k + 1..] {
            let mut d: Vec<i64> = u.iter().zip(v).map(|(x, y)| x - y).collect();
            let g = d.iter().fold(0, |g, &x| gcd(g, x));
            d.iter_mut().for_each(|x| *x /= g);
            if d.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                d.iter_mut().for_each(|x| *x = -*x);
            }
            dirs.push(d);
        }
    }
    dirs.sort();
    dirs.dedup();
    let mut walls = Vec::new();
    for n in dirs {
        let mut levels: Vec<i64> = cols.iter().map(|c| dot(&n, c)).collect();
        levels.sort_unstable();
        levels.dedup();
        for c in levels {
            let members: Vec<usize> = (0..cols.len())
                .filter(|&j| dot(&n, &cols[j]) == c)
                .collect();
            if members.len() < 2 {
                continue;
            }
            let pts: Vec<&[i64]> = members.iter().map(|&j| cols[j].as_slice()).collect();
            if affine_dim(&pts) == a.r() - 1 {
                walls.push(Wall {
                    normal: n.clone(),
                    offset: Rational::from_integer(c.into()),
                    vertex_set: members.iter().map(|j| j + 1).collect(),
                });
            }
        }
    }
    walls
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Direction names by axis position from the end: the last axis is
/// up/down, the one before right/left, then front/back.
pub fn axis_name(r: usize, axis: usize, sign: Sign) -> String {
    let plus = sign == Sign::Plus;
    match r - 1 - axis {
        0 => if plus { "upper" } else { "lower" }.to_string(),
        1 => if plus { "right" } else { "left" }.to_string(),
        2 => if plus { "front" } else { "back" }.to_string(),
        _ => format!("{sign}x{}", axis + 1),
    }
}

/// A dendrite cell: the first r-1 ray steps (axis, direction). The last
/// remaining axis is where the dendrite branches to both endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    r: usize,
    steps: Vec<(usize, Sign)>,
}

impl Cell {
    pub fn new(r: usize, steps: Vec<(usize, Sign)>) -> Result<Cell> {
        let mut seen = vec![false; r];
        if r == 0 || steps.len() + 1 != r {
            return Err(Error::Config(format!(
                "a cell for r={r} needs {} steps",
                r.saturating_sub(1)
            )));
        }
        for &(i, _) in &steps {
            if i >= r || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Config(format!("bad axis {} in cell", i + 1)));
            }
        }
        Ok(Cell { r, steps })
    }

    /// Cell of a point whose coordinates have pairwise distinct magnitudes.
    pub fn of_point(xi: &[Rational]) -> Result<Cell> {
        let r = xi.len();
        let mut axes: Vec<usize> = (0..r).collect();
        axes.sort_by(|&i, &j| xi[j].abs().cmp(&xi[i].abs()));
        for w in axes.windows(2) {
            if xi[w[0]].abs() == xi[w[1]].abs() {
                return Err(Error::NotRegular(format!(
                    "|x{}| = |x{}|",
                    w[0] + 1,
                    w[1] + 1
                )));
            }
        }
        Cell::new(
            r,
            axes[..r - 1]
                .iter()
                .map(|&i| (i, Sign::of(&xi[i])))
                .collect(),
        )
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn steps(&self) -> &[(usize, Sign)] {
        &self.steps
    }

    pub fn last_axis(&self) -> usize {
        (0..self.r)
            .find(|i| self.steps.iter().all(|(j, _)| j != i))
            .unwrap()
    }

    /// Residue variables, first residue first.
    pub fn residue_order(&self) -> Vec<usize> {
        let mut o: Vec<usize> = self.steps.iter().map(|s| s.0).collect();
        o.push(self.last_axis());
        o
    }

    /// Every cell for r qubits: r! 2^(r-1) of them (one for r = 1).
    pub fn all(r: usize) -> Vec<Cell> {
        fn rec(r: usize, cur: &mut Vec<(usize, Sign)>, out: &mut Vec<Cell>) {
            if cur.len() + 1 == r {
                out.push(Cell {
                    r,
                    steps: cur.clone(),
                });
                return;
            }
            for i in (0..r).rev() {
                if cur.iter().any(|s| s.0 == i) {
                    continue;
                }
                for s in [Sign::Plus, Sign::Minus] {
                    cur.push((i, s));
                    rec(r, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(r, &mut Vec::new(), &mut out);
        out
    }

    /// E.g. `upper/right` for steps (+x3, +x2) at r = 3; `interior` for r = 1.
    pub fn name(&self) -> String {
        if self.steps.is_empty() {
            return "interior".to_string();
        }
        self.steps
            .iter()
            .map(|&(i, s)| axis_name(self.r, i, s))
            .collect::<Vec<_>>()
            .join("/")
    }

    pub fn parse(r: usize, name: &str) -> Result<Cell> {
        if r == 1 && name == "interior" {
            return Cell::new(1, vec![]);
        }
        let steps = name
            .split('/')
            .map(|tok| {
                (0..r)
                    .flat_map(|i| [(i, Sign::Plus), (i, Sign::Minus)])
                    .find(|&(i, s)| axis_name(r, i, s) == tok)
                    .ok_or_else(|| Error::Parse(name.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Cell::new(r, steps)
    }

    /// A regular point inside the cell: |x| = 1/4, 1/8, ... along the steps.
    /// Signed sums of distinct powers of two below 1/2 never hit an integer
    /// level, so no wall passes through it.
    pub fn representative(&self) -> Vec<Rational> {
        let mut xi = vec![Rational::zero(); self.r];
        for (t, &(i, s)) in self.steps.iter().enumerate() {
            xi[i] = Rational::new(s.to_i64().into(), (1i64 << (t + 2)).into());
        }
        xi[self.last_axis()] = Rational::new(1.into(), (1i64 << (self.r + 1)).into());
        xi
    }

    /// Image under the signed permutation x_perm[i] := sign[i] * x_i.
    pub fn permuted(&self, perm: &[usize], signs: &[i64]) -> Cell {
        Cell {
            r: self.r,
            steps: self
                .steps
                .iter()
                .map(|&(i, s)| (perm[i], if signs[i] < 0 { s.flip() } else { s }))
                .collect(),
        }
    }
}

/// Regular region containing xi, identified by its pyramid (apex) and the
/// full sign vector over all walls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    pub apex_axis: usize,
    pub apex_sign: Sign,
    pub sign_vector: Vec<Sign>,
    pub cell: Cell,
}

impl Chamber {
    pub fn name(&self) -> String {
        if self.cell.r == 1 {
            return "interior".to_string();
        }
        axis_name(self.cell.r, self.apex_axis, self.apex_sign)
    }
}

/// Locates the chamber of xi, which must lie strictly inside the hypercube
/// and on no wall.
pub fn locate_chamber(walls: &[Wall], xi: &[Rational]) -> Result<Chamber> {
    let r = xi.len();
    let one = Rational::from_integer(1.into());
    if r == 0 || xi.iter().any(|x| x.abs() >= one) {
        return Err(Error::OutsidePolytope(r));
    }
    if let Some(w) = walls.iter().find(|w| w.normal.len() != r) {
        return Err(Error::Shape(format!(
            "wall normal {:?} vs xi of length {r}",
            w.normal
        )));
    }
    let mut sign_vector = Vec::with_capacity(walls.len());
    for w in walls {
        let v = w.value(xi);
        if v.is_zero() {
            return Err(Error::NotRegular(w.to_string()));
        }
        sign_vector.push(Sign::of(&v));
    }
    let cell = Cell::of_point(xi)?;
    let (apex_axis, apex_sign) = match cell.steps.first() {
        Some(&s) => s,
        None => (0, Sign::of(&xi[0])),
    };
    Ok(Chamber {
        apex_axis,
        apex_sign,
        sign_vector,
        cell,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DendritePath {
    /// (axis, direction), 0-based axes, first ray first.
    pub steps: Vec<(usize, Sign)>,
    /// 1-based fixed-point index of the vertex the path ends at.
    pub terminal: usize,
    pub sign: i64,
}

impl DendritePath {
    pub fn residue_order(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.0).collect()
    }
}

/// The two paths of a cell: the cell's steps, then both directions along
/// the remaining axis.
pub fn dendrite_for_cell(cell: &Cell, a: &WeightMatrix) -> Result<Vec<DendritePath>> {
    if cell.r != a.r() {
        return Err(Error::Shape(format!(
            "cell for r={} vs matrix for r={}",
            cell.r,
            a.r()
        )));
    }
    let last = cell.last_axis();
    [Sign::Plus, Sign::Minus]
        .into_iter()
        .map(|d| {
            let mut steps = cell.steps.clone();
            steps.push((last, d));
            let mut vertex = vec![0i64; cell.r];
            for &(i, s) in &steps {
                vertex[i] = s.to_i64();
            }
            let terminal = a
                .index_of(&vertex)
                .ok_or_else(|| Error::Config(format!("vertex {vertex:?} missing from matrix")))?;
            let sign = steps.iter().map(|s| s.1.to_i64()).product();
            Ok(DendritePath {
                steps,
                terminal,
                sign,
            })
        })
        .collect()
}

/// Endpoint of the first ray: xi pushed along the apex axis to its facet.
fn first_ray_end(chamber: &Chamber, xi: &[Rational]) -> Vec<Rational> {
    let mut end = xi.to_vec();
    end[chamber.apex_axis] = Rational::from_integer(chamber.apex_sign.to_i64().into());
    end
}

/// Walls other than the target facet that the first ray meets (crossing or
/// ending on them).
pub fn first_ray_crossings<'w>(
    walls: &'w [Wall],
    chamber: &Chamber,
    xi: &[Rational],
) -> Vec<&'w Wall> {
    if xi.len() == 1 {
        return Vec::new();
    }
    let end = first_ray_end(chamber, xi);
    walls
        .iter()
        .filter(|w| {
            let target =
                w.is_facet() && w.normal[chamber.apex_axis] != 0 && w.value(&end).is_zero();
            if target {
                return false;
            }
            let (a, b) = (w.value(xi), w.value(&end));
            b.is_zero() || Sign::of(&a) != Sign::of(&b)
        })
        .collect()
}

/// Builds the dendrite of xi. The first ray must not cross a wall between
/// cells (x_i = +-x_j); the restricted point is re-checked for regularity
/// inside each facet it lands on.
pub fn build_dendrite(
    chamber: &Chamber,
    a: &WeightMatrix,
    xi: &[Rational],
) -> Result<Vec<DendritePath>> {
    let r = a.r();
    if xi.len() != r {
        return Err(Error::Shape(format!(
            "xi has {} coordinates, r = {r}",
            xi.len()
        )));
    }
    let walls = enumerate_walls(a);
    let here = locate_chamber(&walls, xi)?;
    if here.cell != chamber.cell {
        return Err(Error::Config(format!(
            "chamber {} does not contain xi (found {})",
            chamber.cell.name(),
            here.cell.name()
        )));
    }
    if r > 1 {
        for w in first_ray_crossings(&walls, chamber, xi) {
            if w.is_cell_wall() {
                return Err(Error::RayCrossesWall(w.to_string()));
            }
        }
    }
    // Regularity of the restricted point in each successive facet.
    let mut remaining: Vec<usize> = (0..r).collect();
    for &(axis, _) in chamber.cell.steps() {
        remaining.retain(|&i| i != axis);
        if remaining.len() < 2 {
            break;
        }
        let sub = build_weight_matrix(remaining.len())?;
        let sub_xi: Vec<Rational> = remaining.iter().map(|&i| xi[i].clone()).collect();
        locate_chamber(&enumerate_walls(&sub), &sub_xi).map_err(|e| match e {
            Error::NotRegular(w) => {
                Error::NotRegular(format!("{w} inside the facet normal to x{}", axis + 1))
            }
            other => other,
        })?;
    }
    dendrite_for_cell(&chamber.cell, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_rational_list;

    fn xi(s: &str) -> Vec<Rational> {
        parse_rational_list(s).unwrap()
    }

    #[test]
    fn wall_counts() {
        let w1 = enumerate_walls(&build_weight_matrix(1).unwrap());
        assert!(w1.is_empty());
        let w2 = enumerate_walls(&build_weight_matrix(2).unwrap());
        assert_eq!(w2.len(), 6);
        let diagonals: Vec<&Wall> = w2.iter().filter(|w| !w.is_facet()).collect();
        assert_eq!(diagonals.len(), 2);
        for d in diagonals {
            assert!(d.offset.is_zero());
            assert!(d.normal == vec![1, 1] || d.normal == vec![1, -1]);
        }
        // 6 facets, 6 planes x_i = +-x_j, 8 planes +-x1+-x2+-x3 = +-1
        let w3 = enumerate_walls(&build_weight_matrix(3).unwrap());
        assert_eq!(w3.len(), 20);
        assert_eq!(w3.iter().filter(|w| w.is_cell_wall()).count(), 6);
    }

    #[test]
    fn chamber_examples() {
        let w2 = enumerate_walls(&build_weight_matrix(2).unwrap());
        let c = locate_chamber(&w2, &xi("0,3/4")).unwrap();
        assert_eq!(
            (c.apex_axis, c.apex_sign, c.name()),
            (1, Sign::Plus, "upper".to_string())
        );
        assert!(matches!(
            locate_chamber(&w2, &xi("1/2,1/2")),
            Err(Error::NotRegular(_))
        ));
        assert!(matches!(
            locate_chamber(&w2, &xi("1,0")),
            Err(Error::OutsidePolytope(2))
        ));
        let w3 = enumerate_walls(&build_weight_matrix(3).unwrap());
        let c = locate_chamber(&w3, &xi("0,1/5,3/5")).unwrap();
        assert_eq!(
            (c.apex_axis, c.apex_sign, c.name()),
            (2, Sign::Plus, "upper".to_string())
        );
        assert_eq!(c.cell.name(), "upper/right");
    }

    #[test]
    fn dendrite_examples() {
        let a2 = build_weight_matrix(2).unwrap();
        let w2 = enumerate_walls(&a2);
        let p = xi("0,3/4");
        let d = build_dendrite(&locate_chamber(&w2, &p).unwrap(), &a2, &p).unwrap();
        assert_eq!(d[0].steps, vec![(1, Sign::Plus), (0, Sign::Plus)]);
        assert_eq!((d[0].terminal, d[0].sign), (1, 1));
        assert_eq!(d[1].steps, vec![(1, Sign::Plus), (0, Sign::Minus)]);
        assert_eq!((d[1].terminal, d[1].sign), (3, -1));

        let a3 = build_weight_matrix(3).unwrap();
        let w3 = enumerate_walls(&a3);
        let p = xi("0,1/5,3/5");
        let d = build_dendrite(&locate_chamber(&w3, &p).unwrap(), &a3, &p).unwrap();
        assert_eq!(
            d.iter().map(|x| (x.terminal, x.sign)).collect::<Vec<_>>(),
            vec![(1, 1), (4, -1)]
        );

        let p = xi("3/5,1/5,0");
        let c = locate_chamber(&w3, &p).unwrap();
        assert_eq!(c.name(), "front");
        let d = build_dendrite(&c, &a3, &p).unwrap();
        assert_eq!(d[0].residue_order(), vec![0, 1, 2]);
        let p = xi("3/5,0,1/5");
        let d = build_dendrite(&locate_chamber(&w3, &p).unwrap(), &a3, &p).unwrap();
        assert_eq!(d[0].residue_order(), vec![0, 2, 1]);
        assert_eq!(
            d.iter().map(|x| (x.terminal, x.sign)).collect::<Vec<_>>(),
            vec![(1, 1), (3, -1)]
        );
    }

    #[test]
    fn first_ray_may_cross_outer_walls_only() {
        let a3 = build_weight_matrix(3).unwrap();
        let w3 = enumerate_walls(&a3);
        let p = xi("0,1/5,3/5");
        let c = locate_chamber(&w3, &p).unwrap();
        let hit = first_ray_crossings(&w3, &c, &p);
        assert!(!hit.is_empty());
        assert!(hit.iter().all(|w| !w.is_cell_wall()));
    }

    #[test]
    fn mismatched_chamber_is_rejected() {
        let a2 = build_weight_matrix(2).unwrap();
        let w2 = enumerate_walls(&a2);
        let c = locate_chamber(&w2, &xi("0,3/4")).unwrap();
        assert!(build_dendrite(&c, &a2, &xi("3/4,0")).is_err());
    }

    #[test]
    fn cells_and_names() {
        assert_eq!(Cell::all(1).len(), 1);
        assert_eq!(Cell::all(2).len(), 4);
        assert_eq!(Cell::all(3).len(), 24);
        assert_eq!(Cell::all(4).len(), 192);
        for r in 1..=4 {
            let w = enumerate_walls(&build_weight_matrix(r).unwrap());
            for c in Cell::all(r) {
                assert_eq!(Cell::parse(r, &c.name()).unwrap(), c);
                let rep = c.representative();
                assert_eq!(locate_chamber(&w, &rep).unwrap().cell, c);
            }
        }
        assert!(Cell::parse(3, "upper/sideways").is_err());
        assert_eq!(axis_name(5, 0, Sign::Minus), "-x1");
    }
}
