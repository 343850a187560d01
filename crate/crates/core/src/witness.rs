//! Explicit small quadrangles and their automorphisms, used to check every
//! arithmetic law against real incidence structures.
//!
//! Three models are built: the `(s+1) x (s+1)` grid of order `(s, 1)`, its
//! dual of order `(1, t)`, and the doily of order `(2, 2)` whose points are
//! the 15 duads of `{1..6}` and whose lines are the 15 synthemes.

use std::collections::{BTreeSet, HashMap};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::autlaws::{
    benson_residue, count_relation, orbit_census_congruences, type2_branch_admissible,
    type2_fixed_relation, type_admissible, AutStats, FixedType, TypeTag,
};
use crate::error::Result;
use crate::exactmath::{gcd, is_prime, Nat};
use crate::params::{payne_bound_ok, GqOrder};

/// Largest grid side accepted by the builders.
pub const MAX_GRID_SIZE: Nat = 40;

/// Number of random elements drawn when a group is too large to enumerate.
pub const SAMPLE_SIZE: usize = 1000;

/// Seed for the sampled verification runs.
pub const SAMPLE_SEED: u64 = 0x5eed_2024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("point map does not send line {line} to a line")]
    IncidenceNotPreserved { line: usize },
    #[error("map is not a permutation of {expected} elements")]
    NotAPermutation { expected: usize },
    #[error("invalid symmetry: {0}")]
    InvalidSymmetry(String),
    #[error(
        "fixed substructure with {fixed_points} points and {fixed_lines} lines matches no type"
    )]
    NoFixedType {
        fixed_points: usize,
        fixed_lines: usize,
    },
    #[error("point {point} out of range in line {line}")]
    PointOutOfRange { line: usize, point: usize },
    #[error("grid size {size} outside 1..={max}")]
    GridSize { size: Nat, max: Nat },
}

type WResult<T> = std::result::Result<T, WitnessError>;

/// How automorphisms of a model are described.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    /// Points are the 2-subsets of `{0..6}`, listed in this order; a
    /// permutation of the six symbols acts on them.
    Symbols { duads: Vec<(usize, usize)> },
    /// Points `(i, j)` of a square grid with side `size + 1`, stored at
    /// index `i * (size + 1) + j`.
    Grid { size: usize },
    /// Points are the lines of a square grid: rows first, then columns.
    DualGrid { size: usize },
}

/// An element of the group described by a [`Symmetry`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymmetryElement {
    /// Image of each of the six symbols.
    Symbols(Vec<usize>),
    /// Row permutation, column permutation, then an optional transpose.
    Grid {
        rows: Vec<usize>,
        cols: Vec<usize>,
        swap: bool,
    },
}

impl std::fmt::Display for SymmetryElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SymmetryElement::Symbols(perm) => f.write_str(&cycle_notation(perm)),
            SymmetryElement::Grid { rows, cols, swap } => {
                write!(
                    f,
                    "rows {} cols {}",
                    cycle_notation(rows),
                    cycle_notation(cols)
                )?;
                if *swap {
                    f.write_str(" swap")?;
                }
                Ok(())
            }
        }
    }
}

/// 1-based cycle notation, `()` for the identity.
pub fn cycle_notation(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push((i + 1).to_string());
            i = perm[i];
        }
        out.push('(');
        out.push_str(&cycle.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// A finite point-line geometry with incidence given by lines as point sets.
#[derive(Debug, Clone)]
pub struct IncidenceModel {
    name: String,
    order: GqOrder,
    labels: Vec<String>,
    lines: Vec<Vec<usize>>,
    lines_through: Vec<Vec<usize>>,
    collinear: Vec<Vec<bool>>,
    concurrent: Vec<Vec<bool>>,
    line_index: HashMap<Vec<usize>, usize>,
    symmetry: Symmetry,
}

#[derive(Serialize)]
struct ModelDump<'a> {
    name: &'a str,
    order: GqOrder,
    points: &'a [String],
    lines: &'a [Vec<usize>],
}

impl IncidenceModel {
    /// Builds a model from labelled points and lines given as point-index
    /// lists. No axiom is checked here; see [`IncidenceModel::check_axioms`].
    pub fn new(
        name: &str,
        order: GqOrder,
        labels: Vec<String>,
        lines: Vec<Vec<usize>>,
        symmetry: Symmetry,
    ) -> WResult<IncidenceModel> {
        let n = labels.len();
        let mut lines: Vec<Vec<usize>> = lines;
        let mut lines_through = vec![Vec::new(); n];
        for (li, line) in lines.iter_mut().enumerate() {
            line.sort_unstable();
            line.dedup();
            for &p in line.iter() {
                if p >= n {
                    return Err(WitnessError::PointOutOfRange { line: li, point: p });
                }
                lines_through[p].push(li);
            }
        }
        let mut collinear = vec![vec![false; n]; n];
        for (p, row) in collinear.iter_mut().enumerate() {
            row[p] = true;
        }
        for line in &lines {
            for &a in line {
                for &b in line {
                    collinear[a][b] = true;
                }
            }
        }
        let m = lines.len();
        let mut concurrent = vec![vec![false; m]; m];
        for (l, row) in concurrent.iter_mut().enumerate() {
            row[l] = true;
        }
        for through in &lines_through {
            for &a in through {
                for &b in through {
                    concurrent[a][b] = true;
                }
            }
        }
        let line_index = lines
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Ok(IncidenceModel {
            name: name.to_string(),
            order,
            labels,
            lines,
            lines_through,
            collinear,
            concurrent,
            line_index,
            symmetry,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> GqOrder {
        self.order
    }

    pub fn point_count(&self) -> usize {
        self.labels.len()
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    pub fn label(&self, p: usize) -> &str {
        &self.labels[p]
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    pub fn lines_through(&self, p: usize) -> &[usize] {
        &self.lines_through[p]
    }

    pub fn incident(&self, p: usize, l: usize) -> bool {
        self.lines[l].binary_search(&p).is_ok()
    }

    /// Collinearity, with every point collinear to itself.
    pub fn collinear(&self, p: usize, q: usize) -> bool {
        self.collinear[p][q]
    }

    /// Concurrency, with every line concurrent to itself.
    pub fn concurrent(&self, l: usize, m: usize) -> bool {
        self.concurrent[l][m]
    }

    pub fn symmetry(&self) -> &Symmetry {
        &self.symmetry
    }

    /// Index of the line with exactly this point set.
    pub fn find_line(&self, points: &[usize]) -> Option<usize> {
        let mut key = points.to_vec();
        key.sort_unstable();
        self.line_index.get(&key).copied()
    }

    /// Every violated quadrangle axiom, in a readable form. Empty iff the
    /// model is a generalized quadrangle of its stated order.
    pub fn axiom_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let (s, t) = (self.order.s() as usize, self.order.t() as usize);
        match self.order.point_count() {
            Ok(n) if n as usize == self.point_count() => {}
            _ => out.push(format!(
                "expected {} points, found {}",
                self.order,
                self.point_count()
            )),
        }
        match self.order.line_count() {
            Ok(n) if n as usize == self.line_count() => {}
            _ => out.push(format!(
                "wrong line count {} for order {}",
                self.line_count(),
                self.order
            )),
        }
        for (l, line) in self.lines.iter().enumerate() {
            if line.len() != s + 1 {
                out.push(format!(
                    "line {l} has {} points, expected {}",
                    line.len(),
                    s + 1
                ));
            }
        }
        for p in 0..self.point_count() {
            let k = self.lines_through[p].len();
            if k != t + 1 {
                out.push(format!(
                    "point {} lies on {k} lines, expected {}",
                    self.labels[p],
                    t + 1
                ));
            }
        }
        for p in 0..self.point_count() {
            for q in p + 1..self.point_count() {
                let shared = self.lines_through[p]
                    .iter()
                    .filter(|l| self.lines_through[q].contains(l))
                    .count();
                if shared > 1 {
                    out.push(format!(
                        "points {} and {} share {shared} lines",
                        self.labels[p], self.labels[q]
                    ));
                }
            }
        }
        for p in 0..self.point_count() {
            for (l, line) in self.lines.iter().enumerate() {
                if line.contains(&p) {
                    continue;
                }
                let feet = line.iter().filter(|&&q| self.collinear[p][q]).count();
                if feet != 1 {
                    out.push(format!(
                        "point {} sees {feet} points of line {l}, expected 1",
                        self.labels[p]
                    ));
                }
            }
        }
        out
    }

    pub fn check_axioms(&self) -> bool {
        self.axiom_violations().is_empty()
    }

    /// Copy of the model with the incidence of point `p` and line `l`
    /// toggled. The copy keeps its symmetry description, so automorphisms
    /// of the original no longer act on it; used as a negative control.
    pub fn with_flipped_incidence(&self, p: usize, l: usize) -> WResult<IncidenceModel> {
        if p >= self.point_count() || l >= self.line_count() {
            return Err(WitnessError::PointOutOfRange { line: l, point: p });
        }
        let mut lines = self.lines.clone();
        match lines[l].binary_search(&p) {
            Ok(i) => {
                lines[l].remove(i);
            }
            Err(i) => lines[l].insert(i, p),
        }
        IncidenceModel::new(
            &format!("{} with ({p}, {l}) flipped", self.name),
            self.order,
            self.labels.clone(),
            lines,
            self.symmetry.clone(),
        )
    }

    /// JSON with the order, point labels and lines as point-index arrays.
    pub fn to_json(&self) -> Result<String> {
        let dump = ModelDump {
            name: &self.name,
            order: self.order,
            points: &self.labels,
            lines: &self.lines,
        };
        Ok(serde_json::to_string_pretty(&dump)? + "\n")
    }
}

fn check_grid_size(s: Nat) -> WResult<usize> {
    if !(1..=MAX_GRID_SIZE).contains(&s) {
        return Err(WitnessError::GridSize {
            size: s,
            max: MAX_GRID_SIZE,
        });
    }
    Ok(s as usize)
}

fn grid_lines(n: usize) -> Vec<Vec<usize>> {
    let rows = (0..n).map(|i| (0..n).map(|j| i * n + j).collect());
    let cols = (0..n).map(|j| (0..n).map(|i| i * n + j).collect());
    rows.chain(cols).collect()
}

/// The `(s+1) x (s+1)` grid, of order `(s, 1)`.
pub fn build_grid(s: Nat) -> Result<IncidenceModel> {
    let size = check_grid_size(s)?;
    let n = size + 1;
    let labels = (0..n)
        .flat_map(|i| (0..n).map(move |j| format!("({i},{j})")))
        .collect();
    Ok(IncidenceModel::new(
        &format!("grid({s})"),
        GqOrder::new(s, 1)?,
        labels,
        grid_lines(n),
        Symmetry::Grid { size },
    )?)
}

/// The point-line dual of [`build_grid`], of order `(1, t)`.
pub fn build_dual_grid(t: Nat) -> Result<IncidenceModel> {
    let size = check_grid_size(t)?;
    let n = size + 1;
    let labels = (0..n)
        .map(|i| format!("R{i}"))
        .chain((0..n).map(|j| format!("C{j}")))
        .collect();
    // grid point (i, j) lies on row i and column j
    let lines = (0..n)
        .flat_map(|i| (0..n).map(move |j| vec![i, n + j]))
        .collect();
    Ok(IncidenceModel::new(
        &format!("dual-grid({t})"),
        GqOrder::new(1, t)?,
        labels,
        lines,
        Symmetry::DualGrid { size },
    )?)
}

fn duads() -> Vec<(usize, usize)> {
    (0..6)
        .flat_map(|a| (a + 1..6).map(move |b| (a, b)))
        .collect()
}

fn duad_index(d: &[(usize, usize)], a: usize, b: usize) -> usize {
    let key = (a.min(b), a.max(b));
    d.iter().position(|&x| x == key).unwrap()
}

/// The quadrangle of order `(2, 2)`: duads of `{1..6}` as points,
/// synthemes (three pairwise disjoint duads) as lines.
pub fn build_doily() -> Result<IncidenceModel> {
    let d = duads();
    let labels = d
        .iter()
        .map(|&(a, b)| format!("{}{}", a + 1, b + 1))
        .collect();
    let mut lines = Vec::new();
    for (i, &(a, b)) in d.iter().enumerate() {
        for (j, &(c, e)) in d.iter().enumerate().skip(i + 1) {
            if [c, e].iter().any(|x| *x == a || *x == b) {
                continue;
            }
            let rest: Vec<usize> = (0..6).filter(|x| ![a, b, c, e].contains(x)).collect();
            let k = duad_index(&d, rest[0], rest[1]);
            if k > j {
                lines.push(vec![i, j, k]);
            }
        }
    }
    Ok(IncidenceModel::new(
        "doily",
        GqOrder::new(2, 2)?,
        labels,
        lines,
        Symmetry::Symbols { duads: d },
    )?)
}

/// An automorphism given by its action on points and on lines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelAutomorphism {
    pub point_map: Vec<usize>,
    pub line_map: Vec<usize>,
}

fn is_permutation(map: &[usize]) -> bool {
    let mut seen = vec![false; map.len()];
    map.iter()
        .all(|&i| i < seen.len() && !std::mem::replace(&mut seen[i], true))
}

fn cycle_lengths(map: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; map.len()];
    let mut out = Vec::new();
    for start in 0..map.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = map[i];
            len += 1;
        }
        out.push(len);
    }
    out
}

impl ModelAutomorphism {
    /// Order as a permutation of the points.
    pub fn order(&self) -> Nat {
        cycle_lengths(&self.point_map)
            .into_iter()
            .fold(1, |acc, c| acc / gcd(acc, c as Nat) * c as Nat)
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.point_map.len())
            .filter(|&p| self.point_map[p] == p)
            .collect()
    }

    pub fn fixed_lines(&self) -> Vec<usize> {
        (0..self.line_map.len())
            .filter(|&l| self.line_map[l] == l)
            .collect()
    }
}

/// Automorphism with the given point permutation; the line permutation is
/// derived and incidence preservation is checked.
pub fn from_point_map(model: &IncidenceModel, point_map: Vec<usize>) -> WResult<ModelAutomorphism> {
    if point_map.len() != model.point_count() || !is_permutation(&point_map) {
        return Err(WitnessError::NotAPermutation {
            expected: model.point_count(),
        });
    }
    let mut line_map = Vec::with_capacity(model.line_count());
    for (l, line) in model.lines().iter().enumerate() {
        let image: Vec<usize> = line.iter().map(|&p| point_map[p]).collect();
        let target = model
            .find_line(&image)
            .ok_or(WitnessError::IncidenceNotPreserved { line: l })?;
        line_map.push(target);
    }
    if !is_permutation(&line_map) {
        return Err(WitnessError::NotAPermutation {
            expected: model.line_count(),
        });
    }
    Ok(ModelAutomorphism {
        point_map,
        line_map,
    })
}

fn grid_cell(rows: &[usize], cols: &[usize], swap: bool, i: usize, j: usize) -> (usize, usize) {
    let (a, b) = (rows[i], cols[j]);
    if swap {
        (b, a)
    } else {
        (a, b)
    }
}

/// Automorphism induced by an element of the model's symmetry group.
pub fn induced_automorphism(
    model: &IncidenceModel,
    element: &SymmetryElement,
) -> WResult<ModelAutomorphism> {
    let point_map = match (model.symmetry(), element) {
        (Symmetry::Symbols { duads }, SymmetryElement::Symbols(perm)) => {
            if perm.len() != 6 || !is_permutation(perm) {
                return Err(WitnessError::InvalidSymmetry(
                    "expected a permutation of six symbols".into(),
                ));
            }
            duads
                .iter()
                .map(|&(a, b)| duad_index(duads, perm[a], perm[b]))
                .collect()
        }
        (Symmetry::Grid { size }, SymmetryElement::Grid { rows, cols, swap }) => {
            let n = size + 1;
            check_grid_element(n, rows, cols)?;
            (0..n * n)
                .map(|p| {
                    let (a, b) = grid_cell(rows, cols, *swap, p / n, p % n);
                    a * n + b
                })
                .collect()
        }
        (Symmetry::DualGrid { size }, SymmetryElement::Grid { rows, cols, swap }) => {
            let n = size + 1;
            check_grid_element(n, rows, cols)?;
            // row i goes to row rows[i]; column j to column cols[j]; swap
            // exchanges the two families
            (0..2 * n)
                .map(|p| match (p < n, *swap) {
                    (true, false) => rows[p],
                    (true, true) => n + rows[p],
                    (false, false) => n + cols[p - n],
                    (false, true) => cols[p - n],
                })
                .collect()
        }
        _ => {
            return Err(WitnessError::InvalidSymmetry(
                "element does not match the model".into(),
            ))
        }
    };
    from_point_map(model, point_map)
}

fn check_grid_element(n: usize, rows: &[usize], cols: &[usize]) -> WResult<()> {
    if rows.len() != n || cols.len() != n || !is_permutation(rows) || !is_permutation(cols) {
        return Err(WitnessError::InvalidSymmetry(format!(
            "expected two permutations of {n} indices"
        )));
    }
    Ok(())
}

/// Orbit census of `aut`, with `P ~ P` and `l ~ l`.
pub fn measure_stats(model: &IncidenceModel, aut: &ModelAutomorphism) -> AutStats {
    let mut st = AutStats::default();
    for (p, &q) in aut.point_map.iter().enumerate() {
        if p == q {
            st.alpha0 += 1;
        } else if model.collinear(p, q) {
            st.alpha1 += 1;
        } else {
            st.alpha2 += 1;
        }
    }
    for (l, &m) in aut.line_map.iter().enumerate() {
        if l == m {
            st.beta0 += 1;
        } else if model.concurrent(l, m) {
            st.beta1 += 1;
        } else {
            st.beta2 += 1;
        }
    }
    st
}

// Incidence restricted to the fixed points and lines.
struct Fixed<'a> {
    model: &'a IncidenceModel,
    points: Vec<usize>,
    lines: Vec<usize>,
}

impl Fixed<'_> {
    fn points_on(&self, l: usize) -> Vec<usize> {
        self.points
            .iter()
            .copied()
            .filter(|&p| self.model.incident(p, l))
            .collect()
    }

    fn lines_through(&self, p: usize) -> Vec<usize> {
        self.lines
            .iter()
            .copied()
            .filter(|&l| self.model.incident(p, l))
            .collect()
    }

    fn subquadrangle(&self) -> Option<(Nat, Nat)> {
        let per_line: BTreeSet<usize> = self
            .lines
            .iter()
            .map(|&l| self.points_on(l).len())
            .collect();
        let per_point: BTreeSet<usize> = self
            .points
            .iter()
            .map(|&p| self.lines_through(p).len())
            .collect();
        let (&k, &r) = (per_line.iter().next()?, per_point.iter().next()?);
        if per_line.len() != 1 || per_point.len() != 1 || k < 2 || r < 2 {
            return None;
        }
        for &p in &self.points {
            for &l in &self.lines {
                if self.model.incident(p, l) {
                    continue;
                }
                let feet = self
                    .points_on(l)
                    .iter()
                    .filter(|&&q| self.model.collinear(p, q))
                    .count();
                if feet != 1 {
                    return None;
                }
            }
        }
        Some(((k - 1) as Nat, (r - 1) as Nat))
    }

    /// `Some((a, b))` when the fixed structure is a grid whose two line
    /// families carry `a + 1` and `b + 1` points, `a <= b`.
    fn grid_sides(&self, dual: bool) -> Option<(Nat, Nat)> {
        let (elems, blocks): (&[usize], &[usize]) = if dual {
            (&self.lines, &self.points)
        } else {
            (&self.points, &self.lines)
        };
        let members = |b: usize| {
            if dual {
                self.lines_through(b)
            } else {
                self.points_on(b)
            }
        };
        let through = |e: usize| {
            if dual {
                self.points_on(e)
            } else {
                self.lines_through(e)
            }
        };
        if elems.is_empty() || elems.iter().any(|&e| through(e).len() != 2) {
            return None;
        }
        // split blocks into two parallel classes by walking from the first
        let first = *blocks.first()?;
        let first_members = members(first);
        let (class_a, class_b): (Vec<usize>, Vec<usize>) = blocks
            .iter()
            .partition(|&&b| b == first || !members(b).iter().any(|e| first_members.contains(e)));
        let meets_once = |x: usize, y: usize| {
            let my = members(y);
            members(x).iter().filter(|e| my.contains(e)).count() == 1
        };
        for &a in &class_a {
            for &b in &class_b {
                if !meets_once(a, b) {
                    return None;
                }
            }
        }
        let size_a = members(class_a[0]).len();
        let size_b = members(*class_b.first()?).len();
        if class_a.iter().any(|&b| members(b).len() != size_a)
            || class_b.iter().any(|&b| members(b).len() != size_b)
            || size_a < 2
            || size_b < 2
            || size_a * size_b != elems.len()
        {
            return None;
        }
        let (x, y) = (size_a.min(size_b) as Nat - 1, size_a.max(size_b) as Nat - 1);
        Some((x, y))
    }

    fn star(&self) -> bool {
        self.points.iter().any(|&p| {
            self.points.iter().all(|&q| self.model.collinear(p, q))
                && self.lines.iter().all(|&l| self.model.incident(p, l))
        })
    }

    fn pencil(&self) -> bool {
        self.lines.iter().any(|&l| {
            self.lines.iter().all(|&m| self.model.concurrent(l, m))
                && self.points.iter().all(|&p| self.model.incident(p, l))
        })
    }
}

/// Type of the substructure fixed by `aut`.
///
/// Types are tried in the order T0, T1, T1d, T4, T3, T3d, T2, T2d and the
/// first match is returned.
pub fn classify_fixed_substructure(
    model: &IncidenceModel,
    aut: &ModelAutomorphism,
) -> WResult<FixedType> {
    let fixed = Fixed {
        model,
        points: aut.fixed_points(),
        lines: aut.fixed_lines(),
    };
    let (np, nl) = (fixed.points.len(), fixed.lines.len());
    let pairwise = |items: &[usize], rel: &dyn Fn(usize, usize) -> bool| {
        items
            .iter()
            .enumerate()
            .all(|(i, &a)| items[i + 1..].iter().all(|&b| !rel(a, b)))
    };
    if np == 0 && nl == 0 {
        return Ok(FixedType::T0);
    }
    if nl == 0 && pairwise(&fixed.points, &|a, b| model.collinear(a, b)) {
        return Ok(FixedType::T1);
    }
    if np == 0 && pairwise(&fixed.lines, &|a, b| model.concurrent(a, b)) {
        return Ok(FixedType::T1d);
    }
    if np > 0 && nl > 0 {
        if let Some((s_sub, t_sub)) = fixed.subquadrangle() {
            return Ok(FixedType::T4 { s_sub, t_sub });
        }
        if let Some((s1, s2)) = fixed.grid_sides(false) {
            if s1 < s2 {
                return Ok(FixedType::T3 { s1, s2 });
            }
        }
        if let Some((t1, t2)) = fixed.grid_sides(true) {
            if t1 < t2 {
                return Ok(FixedType::T3d { t1, t2 });
            }
        }
        if fixed.star() {
            return Ok(FixedType::T2);
        }
        if fixed.pencil() {
            return Ok(FixedType::T2d);
        }
    }
    Err(WitnessError::NoFixedType {
        fixed_points: np,
        fixed_lines: nl,
    })
}

/// One law that failed for one automorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawFailure {
    pub element: String,
    pub law: String,
}

/// Outcome of checking every law on every iterated automorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationSummary {
    pub model: String,
    /// Whether the whole symmetry group was enumerated rather than sampled.
    pub exhaustive: bool,
    pub total: usize,
    pub passed: usize,
    pub failures: Vec<LawFailure>,
    /// Tags observed among elements of prime order, with their counts.
    pub prime_order_types: Vec<(Nat, TypeTag, usize)>,
}

impl VerificationSummary {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty() && self.passed == self.total
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for f in &self.failures {
            out.push_str(&format!("FAIL {}: {}\n", f.element, f.law));
        }
        out.push_str(&format!(
            "{}/{} automorphisms pass\n",
            self.passed, self.total
        ));
        out
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        out.push(perm.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

/// Elements iterated by [`verify_all`]: all of S6 for the doily, the full
/// group for grids of side at most 4, a seeded sample of
/// [`SAMPLE_SIZE`] elements otherwise.
pub fn symmetry_elements(model: &IncidenceModel) -> (Vec<SymmetryElement>, bool) {
    match model.symmetry() {
        Symmetry::Symbols { .. } => (
            permutations(6)
                .into_iter()
                .map(SymmetryElement::Symbols)
                .collect(),
            true,
        ),
        Symmetry::Grid { size } | Symmetry::DualGrid { size } => {
            let n = size + 1;
            if *size <= 3 {
                let perms = permutations(n);
                let mut out = Vec::new();
                for swap in [false, true] {
                    for rows in &perms {
                        for cols in &perms {
                            out.push(SymmetryElement::Grid {
                                rows: rows.clone(),
                                cols: cols.clone(),
                                swap,
                            });
                        }
                    }
                }
                (out, true)
            } else {
                let mut rng = StdRng::seed_from_u64(SAMPLE_SEED);
                let mut base: Vec<usize> = (0..n).collect();
                let out = (0..SAMPLE_SIZE)
                    .map(|_| {
                        base.shuffle(&mut rng);
                        let rows = base.clone();
                        base.shuffle(&mut rng);
                        let cols = base.clone();
                        let swap = rng.gen_bool(0.5);
                        SymmetryElement::Grid { rows, cols, swap }
                    })
                    .collect();
                (out, false)
            }
        }
    }
}

/// Laws that fail for one automorphism, empty when all hold.
pub fn check_element(model: &IncidenceModel, element: &SymmetryElement) -> Vec<String> {
    let aut = match induced_automorphism(model, element) {
        Ok(a) => a,
        Err(e) => return vec![format!("automorphism: {e}")],
    };
    check_automorphism(model, &aut)
}

/// Laws that fail for `aut`, empty when all hold.
pub fn check_automorphism(model: &IncidenceModel, aut: &ModelAutomorphism) -> Vec<String> {
    let o = model.order();
    let st = measure_stats(model, aut);
    let mut failed = Vec::new();
    if !benson_residue(o, st.alpha0, st.alpha1) {
        failed.push(format!("benson residue ({st:?})"));
    }
    match count_relation(o, &st) {
        Ok(true) => {}
        Ok(false) => failed.push(format!("count relation ({st:?})")),
        Err(e) => failed.push(format!("count relation: {e}")),
    }
    let ty = match classify_fixed_substructure(model, aut) {
        Ok(ty) => ty,
        Err(e) => {
            failed.push(format!("fixed type: {e}"));
            return failed;
        }
    };
    if !ty.fits(o) {
        failed.push(format!("fixed type {ty} does not fit order {o}"));
    }
    let p = aut.order();
    if !is_prime(p) {
        return failed;
    }
    match orbit_census_congruences(o, p, &st) {
        Ok(true) => {}
        Ok(false) => failed.push(format!("orbit census mod {p} ({st:?})")),
        Err(e) => failed.push(format!("orbit census: {e}")),
    }
    if o.thick() {
        match type_admissible(o, p) {
            Ok(adm) if adm.is_admissible(ty.tag()) => {}
            Ok(_) => failed.push(format!("type {ty} not admissible for p = {p}")),
            Err(e) => failed.push(format!("type admissibility: {e}")),
        }
    }
    let star = match ty.tag() {
        TypeTag::T2 => Some((false, st.alpha0)),
        TypeTag::T2d => Some((true, st.beta0)),
        _ => None,
    };
    if let Some((dual, fixed_count)) = star {
        if !type2_fixed_relation(o, p, st.alpha0, st.beta0, dual).unwrap_or(false) {
            failed.push(format!("type-2 fixed relation mod {p} ({st:?})"));
        }
        if !type2_branch_admissible(o, p, ty.tag(), fixed_count).unwrap_or(false) {
            failed.push(format!("type-2 branch mod {p} ({st:?})"));
        }
    }
    failed
}

// label, failed laws, (order, type) when the order is prime
type ElementResult = (String, Vec<String>, Option<(Nat, TypeTag)>);

/// Runs every law on every element from [`symmetry_elements`].
pub fn verify_all(model: &IncidenceModel) -> VerificationSummary {
    let (elements, exhaustive) = symmetry_elements(model);
    let results: Vec<ElementResult> = elements
        .par_iter()
        .map(|e| {
            let failed = check_element(model, e);
            let ty = induced_automorphism(model, e).ok().and_then(|a| {
                let p = a.order();
                let ty = classify_fixed_substructure(model, &a).ok()?;
                is_prime(p).then_some((p, ty.tag()))
            });
            (e.to_string(), failed, ty)
        })
        .collect();
    let total = results.len();
    let mut failures = Vec::new();
    let mut passed = 0;
    let mut types: std::collections::BTreeMap<(Nat, TypeTag), usize> = Default::default();
    for (element, failed, ty) in results {
        if failed.is_empty() {
            passed += 1;
        }
        for law in failed {
            failures.push(LawFailure {
                element: element.clone(),
                law,
            });
        }
        if let Some(key) = ty {
            *types.entry(key).or_default() += 1;
        }
    }
    VerificationSummary {
        model: model.name().to_string(),
        exhaustive,
        total,
        passed,
        failures,
        prime_order_types: types.into_iter().map(|((p, t), c)| (p, t, c)).collect(),
    }
}

/// Result of the exhaustive check of Payne's bound on a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PayneCheck {
    /// Number of sets `Y` of pairwise noncollinear points examined.
    pub sets_checked: usize,
    /// Largest `(|X| - 1)(|Y| - 1)` seen.
    pub max_product: Nat,
    pub holds: bool,
}

fn independent_sets(model: &IncidenceModel, pool: &[usize]) -> Vec<Vec<usize>> {
    fn grow(
        model: &IncidenceModel,
        pool: &[usize],
        from: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        for i in from..pool.len() {
            let p = pool[i];
            if current.iter().all(|&q| !model.collinear(p, q)) {
                current.push(p);
                out.push(current.clone());
                grow(model, pool, i + 1, current, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    grow(model, pool, 0, &mut Vec::new(), &mut out);
    out
}

/// For every nonempty set `Y` of pairwise noncollinear points, finds the
/// largest set `X` of pairwise noncollinear points disjoint from `Y` with
/// every point of `X` collinear with every point of `Y`, and checks
/// `(|X|-1)(|Y|-1) <= s^2`.
pub fn payne_exhaustive(model: &IncidenceModel) -> Result<PayneCheck> {
    let all: Vec<usize> = (0..model.point_count()).collect();
    let ys = independent_sets(model, &all);
    let mut max_product = 0;
    let mut holds = true;
    for y in &ys {
        let perp: Vec<usize> = all
            .iter()
            .copied()
            .filter(|p| !y.contains(p) && y.iter().all(|&q| model.collinear(*p, q)))
            .collect();
        let best = independent_sets(model, &perp)
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0);
        if best == 0 {
            continue;
        }
        let product = (best as Nat - 1) * (y.len() as Nat - 1);
        max_product = max_product.max(product);
        holds &= payne_bound_ok(best as Nat, y.len() as Nat, model.order(), false)?;
    }
    Ok(PayneCheck {
        sets_checked: ys.len(),
        max_product,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn symbols(cycle: &[usize]) -> SymmetryElement {
        let mut perm: Vec<usize> = (0..6).collect();
        for w in 0..cycle.len() {
            perm[cycle[w] - 1] = cycle[(w + 1) % cycle.len()] - 1;
        }
        SymmetryElement::Symbols(perm)
    }

    fn stats(model: &IncidenceModel, e: &SymmetryElement) -> (ModelAutomorphism, AutStats) {
        let a = induced_automorphism(model, e).unwrap();
        let st = measure_stats(model, &a);
        (a, st)
    }

    #[test]
    fn grid_counts() {
        let g = build_grid(2).unwrap();
        assert_eq!((g.point_count(), g.line_count()), (9, 6));
        assert_eq!(g.order(), GqOrder::new(2, 1).unwrap());
        let g = build_grid(1).unwrap();
        assert_eq!((g.point_count(), g.line_count()), (4, 4));
        for s in 1..=6 {
            assert!(build_grid(s).unwrap().check_axioms(), "grid {s}");
            assert!(build_dual_grid(s).unwrap().check_axioms(), "dual grid {s}");
        }
        assert!(build_grid(0).is_err());
    }

    #[test]
    fn dual_grid_counts() {
        let g = build_dual_grid(2).unwrap();
        assert_eq!((g.point_count(), g.line_count()), (6, 9));
        assert_eq!(g.order(), GqOrder::new(1, 2).unwrap());
        let g = build_dual_grid(1).unwrap();
        assert_eq!((g.point_count(), g.line_count()), (4, 4));
    }

    #[test]
    fn dual_of_dual_grid_is_grid() {
        for t in 1..=4 {
            let d = build_dual_grid(t).unwrap();
            // lines of the dual grid become points; two are joined when
            // they share a point of the dual grid
            let n = d.line_count();
            let mut lines = Vec::new();
            for p in 0..d.point_count() {
                lines.push(d.lines_through(p).to_vec());
            }
            let back = IncidenceModel::new(
                "back",
                GqOrder::new(t, 1).unwrap(),
                (0..n).map(|i| i.to_string()).collect(),
                lines,
                Symmetry::Grid { size: t as usize },
            )
            .unwrap();
            assert!(back.check_axioms());
            let g = build_grid(t).unwrap();
            let as_sets = |m: &IncidenceModel| m.lines().iter().cloned().collect::<BTreeSet<_>>();
            assert_eq!(as_sets(&back), as_sets(&g));
        }
    }

    #[test]
    fn doily_is_a_quadrangle() {
        let d = build_doily().unwrap();
        assert_eq!((d.point_count(), d.line_count()), (15, 15));
        assert_eq!(d.order().point_count().unwrap(), 15);
        assert_eq!(d.axiom_violations(), Vec::<String>::new());
        // collinear iff disjoint duads
        assert!(d.collinear(duad_index(&duads(), 0, 1), duad_index(&duads(), 2, 3)));
        assert!(!d.collinear(duad_index(&duads(), 0, 1), duad_index(&duads(), 1, 2)));
    }

    #[test]
    fn flipped_incidence_breaks_axioms() {
        let d = build_doily().unwrap();
        let bad = d.with_flipped_incidence(0, 0).unwrap();
        assert!(!bad.check_axioms());
        let summary = verify_all(&bad);
        assert!(!summary.all_pass());
        assert!(summary.passed < summary.total);
    }

    #[test]
    fn doily_identity() {
        let d = build_doily().unwrap();
        let (a, st) = stats(&d, &symbols(&[]));
        assert_eq!(a.point_map, (0..15).collect::<Vec<_>>());
        assert_eq!(a.line_map, (0..15).collect::<Vec<_>>());
        assert_eq!(
            st,
            AutStats {
                alpha0: 15,
                alpha1: 0,
                alpha2: 0,
                beta0: 15,
                beta1: 0,
                beta2: 0
            }
        );
        assert_eq!(
            classify_fixed_substructure(&d, &a).unwrap(),
            FixedType::T4 { s_sub: 2, t_sub: 2 }
        );
        assert_eq!(a.order(), 1);
    }

    #[test]
    fn doily_transposition() {
        let d = build_doily().unwrap();
        let (a, st) = stats(&d, &symbols(&[1, 2]));
        assert_eq!(
            st,
            AutStats {
                alpha0: 7,
                alpha1: 0,
                alpha2: 8,
                beta0: 3,
                beta1: 12,
                beta2: 0
            }
        );
        assert_eq!(classify_fixed_substructure(&d, &a).unwrap(), FixedType::T2);
        assert_eq!(a.order(), 2);
        let o = d.order();
        assert!(count_relation(o, &st).unwrap());
        assert!(type2_fixed_relation(o, 2, 7, 3, false).unwrap());
    }

    #[test]
    fn doily_five_cycle() {
        let d = build_doily().unwrap();
        let (a, st) = stats(&d, &symbols(&[1, 2, 3, 4, 5]));
        assert_eq!((st.alpha0, st.beta0), (0, 0));
        assert_eq!(st.alpha1 % 4, 1);
        assert_eq!(classify_fixed_substructure(&d, &a).unwrap(), FixedType::T0);
        assert_eq!(a.order(), 5);
        assert!(orbit_census_congruences(d.order(), 5, &st).unwrap());
    }

    #[test]
    fn doily_small_types() {
        let d = build_doily().unwrap();
        let ty = |cycles: &[&[usize]]| {
            let mut perm: Vec<usize> = (0..6).collect();
            for c in cycles {
                for w in 0..c.len() {
                    perm[c[w] - 1] = c[(w + 1) % c.len()] - 1;
                }
            }
            let a = induced_automorphism(&d, &SymmetryElement::Symbols(perm)).unwrap();
            classify_fixed_substructure(&d, &a).unwrap()
        };
        assert_eq!(ty(&[&[1, 2, 3]]), FixedType::T1);
        assert_eq!(ty(&[&[1, 2, 3], &[4, 5, 6]]), FixedType::T1d);
        assert_eq!(ty(&[&[1, 2], &[3, 4], &[5, 6]]), FixedType::T2d);
        assert_eq!(ty(&[&[1, 2, 3, 4, 5, 6]]), FixedType::T1d);
    }

    #[test]
    fn doily_exhaustive() {
        let d = build_doily().unwrap();
        let summary = verify_all(&d);
        assert!(summary.exhaustive);
        assert_eq!(summary.total, 720);
        assert_eq!(summary.render(), "720/720 automorphisms pass\n");
    }

    #[test]
    fn grids_exhaustive_and_sampled() {
        for s in 1..=3 {
            for m in [build_grid(s).unwrap(), build_dual_grid(s).unwrap()] {
                let summary = verify_all(&m);
                assert!(summary.exhaustive);
                let fact: usize = (1..=s as usize + 1).product();
                assert_eq!(summary.total, 2 * fact * fact);
                assert!(summary.all_pass(), "{}: {}", m.name(), summary.render());
            }
        }
        for s in 4..=6 {
            let summary = verify_all(&build_grid(s).unwrap());
            assert!(!summary.exhaustive);
            assert_eq!(summary.total, SAMPLE_SIZE);
            assert!(summary.all_pass(), "{}", summary.render());
        }
    }

    #[test]
    fn raw_point_map_is_checked() {
        let d = build_doily().unwrap();
        let mut map: Vec<usize> = (0..15).collect();
        map.swap(0, 1);
        assert!(matches!(
            from_point_map(&d, map),
            Err(WitnessError::IncidenceNotPreserved { .. })
        ));
        assert!(matches!(
            from_point_map(&d, vec![0; 15]),
            Err(WitnessError::NotAPermutation { .. })
        ));
        assert!(induced_automorphism(&d, &SymmetryElement::Symbols(vec![0, 1, 2])).is_err());
    }

    #[test]
    fn payne_on_doily() {
        let d = build_doily().unwrap();
        let check = payne_exhaustive(&d).unwrap();
        assert!(check.holds);
        assert!(check.max_product <= 4);
        assert!(check.sets_checked > 15);
    }

    #[test]
    fn cycle_notation_examples() {
        assert_eq!(cycle_notation(&[0, 1, 2]), "()");
        assert_eq!(cycle_notation(&[1, 0, 2]), "(1 2)");
        assert_eq!(cycle_notation(&[1, 2, 0, 4, 3]), "(1 2 3)(4 5)");
    }

    #[test]
    fn dump_lists_lines_as_indices() {
        let g = build_grid(1).unwrap();
        let v: serde_json::Value = serde_json::from_str(&g.to_json().unwrap()).unwrap();
        assert_eq!(v["order"]["s"], 1);
        assert_eq!(v["lines"][0], serde_json::json!([0, 1]));
        assert_eq!(v["points"].as_array().unwrap().len(), 4);
    }
}
