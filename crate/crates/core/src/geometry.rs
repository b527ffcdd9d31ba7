//! Radon polytopes of explicit point sets: for points `x_1, ..., x_N` in
//! `R^d` the polytope is `P_N ∩ V` with `V = ker(f) ∩ A_N`,
//! `f(α) = Σ α_i x_i`. Its faces are the Radon partitions, its vertices the
//! minimal ones.

use std::collections::HashSet;
use std::sync::OnceLock;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{null_space, rank, Rational, Scalar};
use crate::partition::{full_mask, Partition, SignedVector, MAX_POINTS};
use crate::random::{normals, Normals};
use crate::simplex::{solve, LpOutcome};

/// Largest `N` for [`PointConfig::face_lattice`].
pub const MAX_LATTICE_POINTS: usize = 16;
/// Largest `N` for [`RadonTable`] (it stores `3^N` flags).
pub const MAX_TABLE_POINTS: usize = 13;
/// Largest `N` for [`PointConfig::find_reay`] (`4^N` assignments).
pub const MAX_REAY_POINTS: usize = 10;

/// Decision margin of the float LP; thinner margins are re-solved exactly.
pub const LP_MARGIN: f64 = 1e-9;
/// Relative size below which a circuit coordinate counts as zero, which
/// sends [`PointConfig::minimal_partitions`] to the exact path.
const GENERIC_TOL: f64 = 1e-9;
const KERNEL_RESIDUAL_TOL: f64 = 1e-10;

/// `N` points in `R^d` affinely spanning `R^d`, with a basis of `V`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointConfig {
    d: usize,
    points: Vec<Vec<f64>>,
    kernel: Vec<SignedVector>,
}

impl PointConfig {
    /// Validates the points and computes `V`.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::Degenerate("no points".into()));
        };
        let d = first.len();
        if let Some(bad) = points.iter().find(|p| p.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.len(),
            });
        }
        if points.len() > MAX_POINTS {
            return Err(Error::BoundExceeded {
                what: "points",
                value: points.len(),
                limit: MAX_POINTS,
            });
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coordinate".into()));
        }
        let n = points.len();
        if n < d + 1 {
            return Err(Error::Degenerate(format!(
                "{n} points cannot affinely span R^{d}"
            )));
        }
        let mut cfg = Self {
            d,
            points,
            kernel: Vec::new(),
        };
        let lift = cfg.lift::<f64>(full_mask(n));
        let tol = 1e-10 * cfg.scale();
        if rank(&lift, tol) != d + 1 {
            return Err(Error::Degenerate(format!(
                "points do not affinely span R^{d}"
            )));
        }
        let mut kernel = Vec::with_capacity(n - d - 1);
        for mut w in null_space(&lift, tol) {
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            w.iter_mut().for_each(|x| *x /= norm);
            // remove rounding from the zero sum before validation
            let mean = w.iter().sum::<f64>() / n as f64;
            w.iter_mut().for_each(|x| *x -= mean);
            kernel.push(SignedVector::new(w)?);
        }
        cfg.kernel = kernel;
        let residual = cfg.kernel_residual();
        if residual > KERNEL_RESIDUAL_TOL {
            return Err(Error::Consistency(format!(
                "kernel residual {residual:e} exceeds {KERNEL_RESIDUAL_TOL:e}"
            )));
        }
        Ok(cfg)
    }

    /// Points from CSV text: one point per row, optional header row.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut points = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::Parse(e.to_string()))?;
            if record.iter().all(str::is_empty) {
                continue;
            }
            let parsed: std::result::Result<Vec<f64>, _> =
                record.iter().map(str::parse::<f64>).collect();
            match parsed {
                Ok(p) => points.push(p),
                Err(_) if line == 0 => continue,
                Err(e) => {
                    return Err(Error::Parse(format!("row {}: {e}", line + 1)));
                }
            }
        }
        Self::new(points)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Basis of `V`: `N - d - 1` unit vectors.
    pub fn kernel_basis(&self) -> &[SignedVector] {
        &self.kernel
    }

    /// `max_w |Σ w_i x_i| + |Σ w_i|` over the kernel basis, relative to the
    /// coordinate scale.
    pub fn kernel_residual(&self) -> f64 {
        let scale = self.scale();
        self.kernel
            .iter()
            .map(|w| {
                let sum: f64 = w.coords().iter().sum();
                let mut worst = sum.abs();
                for c in 0..self.d {
                    let f: f64 = w
                        .coords()
                        .iter()
                        .zip(&self.points)
                        .map(|(a, x)| a * x[c])
                        .sum();
                    worst = worst.max(f.abs() / scale);
                }
                worst
            })
            .fold(0.0, f64::max)
    }

    fn scale(&self) -> f64 {
        self.points
            .iter()
            .flatten()
            .fold(1.0f64, |m, x| m.max(x.abs()))
    }

    /// Columns `i ∈ mask` of the `(d+1) × N` matrix with rows `x_i` and `1`.
    fn lift<T: Scalar>(&self, mask: u64) -> Vec<Vec<T>> {
        let cols: Vec<usize> = (0..self.len()).filter(|i| mask >> i & 1 == 1).collect();
        let conv = |x: f64| T::from_f64(x).expect("finite coordinate");
        let mut rows: Vec<Vec<T>> = (0..self.d)
            .map(|c| cols.iter().map(|&i| conv(self.points[i][c])).collect())
            .collect();
        rows.push(vec![T::one(); cols.len()]);
        rows
    }

    fn check_partition(&self, p: &Partition) -> Result<()> {
        if p.n_total() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: p.n_total(),
            });
        }
        Ok(())
    }

    /// Whether `conv{x_i : i ∈ A}` meets `conv{x_j : j ∈ B}`.
    pub fn is_radon(&self, p: &Partition) -> Result<bool> {
        Ok(self.radon_decision(p)?.radon)
    }

    /// [`is_radon`](Self::is_radon) with the LP margin that decided it.
    ///
    /// The LP maximizes a common lower bound `t` on the coefficients of a
    /// feasible point of the face. A positive float margin (`t` for Radon,
    /// the phase-1 residual otherwise) above [`LP_MARGIN`] is trusted;
    /// anything thinner is re-solved in exact rational arithmetic.
    pub fn radon_decision(&self, p: &Partition) -> Result<RadonDecision> {
        self.check_partition(p)?;
        if p.a_mask() == 0 || p.b_mask() == 0 {
            return Ok(RadonDecision {
                radon: false,
                margin: f64::INFINITY,
                exact: false,
            });
        }
        let scale = self.scale();
        let (a, b, c) = self.radon_lp::<f64>(p, 1.0 / scale);
        match solve(&a, &b, &c, LP_MARGIN) {
            LpOutcome::Infeasible { residual } if residual > LP_MARGIN => {
                return Ok(RadonDecision {
                    radon: false,
                    margin: residual,
                    exact: false,
                })
            }
            LpOutcome::Optimal { value, .. } if value > LP_MARGIN => {
                return Ok(RadonDecision {
                    radon: true,
                    margin: value,
                    exact: false,
                })
            }
            _ => {}
        }
        let (a, b, c) = self.radon_lp::<Rational>(p, Rational::from_f64(1.0 / scale).unwrap());
        Ok(match solve(&a, &b, &c, 0.0) {
            LpOutcome::Optimal { value, .. } => RadonDecision {
                radon: true,
                margin: value.to_f64(),
                exact: true,
            },
            LpOutcome::Infeasible { residual } => RadonDecision {
                radon: false,
                margin: residual.to_f64(),
                exact: true,
            },
            LpOutcome::Unbounded => {
                return Err(Error::Consistency("Radon LP reported unbounded".into()))
            }
        })
    }

    /// Variables `s_i >= 0` for `i ∈ A ∪ B` and `t >= 0`, with `α_i = ±(s_i + t)`:
    /// `Σ_A α = 1`, `Σ_B |α| = 1`, `Σ α_i x_i = 0`; maximize `t`.
    fn radon_lp<T: Scalar>(&self, p: &Partition, coord_scale: T) -> (Vec<Vec<T>>, Vec<T>, Vec<T>) {
        let support: Vec<(usize, bool)> = (0..self.len())
            .filter_map(|i| {
                let bit = 1u64 << i;
                if p.a_mask() & bit != 0 {
                    Some((i, true))
                } else if p.b_mask() & bit != 0 {
                    Some((i, false))
                } else {
                    None
                }
            })
            .collect();
        let nv = support.len() + 1;
        let t_col = support.len();
        let mut rows = vec![vec![T::zero(); nv]; self.d + 2];
        for (j, &(i, pos)) in support.iter().enumerate() {
            let side = if pos { 0 } else { 1 };
            rows[side][j] = T::one();
            rows[side][t_col] = rows[side][t_col].clone() + T::one();
            for c in 0..self.d {
                let x = T::from_f64(self.points[i][c]).expect("finite") * coord_scale.clone();
                let x = if pos { x } else { -x };
                rows[2 + c][j] = x.clone();
                rows[2 + c][t_col] = rows[2 + c][t_col].clone() + x;
            }
        }
        let mut rhs = vec![T::zero(); self.d + 2];
        rhs[0] = T::one();
        rhs[1] = T::one();
        let mut cost = vec![T::zero(); nv];
        cost[t_col] = T::one();
        (rows, rhs, cost)
    }

    /// Whether every `(d+2)`-subset has a unique affine dependence with full
    /// support (equivalently, every `(d+1)`-subset is affinely independent).
    pub fn is_general_position(&self) -> bool {
        self.generic_circuits().is_some()
    }

    /// Float circuits on all `(d+2)`-subsets, or `None` if some subset is
    /// degenerate within [`GENERIC_TOL`].
    fn generic_circuits(&self) -> Option<Vec<(Partition, SignedVector)>> {
        let n = self.len();
        let k = self.d + 2;
        let tol = 1e-12 * self.scale();
        let mut out = Vec::new();
        for mask in subsets_of_size(n, k) {
            let ns = null_space(&self.lift::<f64>(mask), tol);
            if ns.len() != 1 {
                return None;
            }
            let v = &ns[0];
            let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if v.iter().any(|x| x.abs() <= GENERIC_TOL * max) {
                return None;
            }
            let pos: f64 = v.iter().filter(|x| **x > 0.0).sum();
            let mut coords = vec![0.0; n];
            for (j, i) in mask_indices(mask).into_iter().enumerate() {
                coords[i] = v[j] / pos;
            }
            out.push(vertex_pair(n, SignedVector::new(coords).ok()?));
        }
        Some(out.into_iter().flat_map(|(p, v)| [(p, v.clone()), (p.reversed(), v.negated())]).collect())
    }

    /// Minimal Radon partitions with their polytope coordinates (positive
    /// part summing to 1), both orientations, sorted by partition.
    ///
    /// In general position these come from the `(d+2)`-subsets in float
    /// arithmetic; otherwise every circuit is found exactly.
    pub fn minimal_partitions(&self) -> Result<Vec<(Partition, SignedVector)>> {
        let mut out = match self.generic_circuits() {
            Some(v) => v,
            None => self
                .minimal_partitions_exact()?
                .into_iter()
                .map(|(p, v)| (p, v.to_f64()))
                .collect(),
        };
        out.sort_by_key(|a| a.0);
        Ok(out)
    }

    /// All circuits in exact arithmetic on the (exactly converted) inputs.
    pub fn minimal_partitions_exact(&self) -> Result<Vec<(Partition, SignedVector<Rational>)>> {
        let n = self.len();
        let mut out = Vec::new();
        for k in 2..=(self.d + 2).min(n) {
            for mask in subsets_of_size(n, k) {
                let ns = null_space(&self.lift::<Rational>(mask), 0.0);
                if ns.len() != 1 || ns[0].iter().any(Zero::is_zero) {
                    continue;
                }
                let v = &ns[0];
                let pos = v
                    .iter()
                    .filter(|x| **x > Rational::zero())
                    .fold(Rational::zero(), |s, x| s + x);
                let mut coords = vec![Rational::zero(); n];
                for (j, i) in mask_indices(mask).into_iter().enumerate() {
                    coords[i] = v[j].clone() / pos.clone();
                }
                let w = SignedVector::new(coords)?;
                let p = sign_partition(n, w.coords());
                out.push((p.reversed(), w.negated()));
                out.push((p, w));
            }
        }
        out.sort_by_key(|a| a.0);
        Ok(out)
    }

    /// The face lattice, graded by `|A| + |B| - 2 - d`. Requires general
    /// position (the grading is only meaningful there).
    pub fn face_lattice(&self) -> Result<FaceLattice> {
        let n = self.len();
        if n > MAX_LATTICE_POINTS {
            return Err(Error::BoundExceeded {
                what: "points",
                value: n,
                limit: MAX_LATTICE_POINTS,
            });
        }
        let Some(mut vertices) = self.generic_circuits() else {
            return Err(Error::Degenerate(
                "face lattice grading needs points in general position".into(),
            ));
        };
        vertices.sort_by_key(|a| a.0);
        let all = full_mask(n);
        let mut seen: HashSet<(u64, u64)> =
            vertices.iter().map(|(p, _)| (p.a_mask(), p.b_mask())).collect();
        let mut frontier: Vec<(u64, u64)> = seen.iter().copied().collect();
        while let Some((a, b)) = frontier.pop() {
            let mut free = all & !(a | b);
            while free != 0 {
                let bit = free & free.wrapping_neg();
                free &= free - 1;
                for next in [(a | bit, b), (a, b | bit)] {
                    if seen.insert(next) {
                        frontier.push(next);
                    }
                }
            }
        }
        let top = n - self.d - 2;
        let mut faces_by_dim = vec![Vec::new(); top + 1];
        for (a, b) in seen {
            let p = Partition::from_masks(n, a, b)?;
            faces_by_dim[p.support_size() - self.d - 2].push(p);
        }
        for level in &mut faces_by_dim {
            level.sort();
        }
        Ok(FaceLattice {
            n_total: n,
            d: self.d,
            vertices,
            faces_by_dim,
        })
    }

    /// Radon with tolerance: `p` is Radon and stays Radon after deleting any
    /// single point. Decided by LPs on the sub-partitions and, in general
    /// position, also by counting the ridges of the facet; a disagreement is
    /// an error.
    pub fn is_tolerant(&self, p: &Partition) -> Result<bool> {
        let check = self.tolerance_check(p)?;
        Ok(check.by_subpartitions)
    }

    /// Both tolerance computations for a full-support partition.
    pub fn tolerance_check(&self, p: &Partition) -> Result<ToleranceCheck> {
        let lattice = match self.face_lattice() {
            Ok(l) => Some(l),
            Err(Error::Degenerate(_) | Error::BoundExceeded { .. }) => None,
            Err(e) => return Err(e),
        };
        self.tolerance_check_with(lattice.as_ref(), p)
    }

    /// [`tolerance_check`](Self::tolerance_check) against a prebuilt lattice.
    pub fn tolerance_check_with(
        &self,
        lattice: Option<&FaceLattice>,
        p: &Partition,
    ) -> Result<ToleranceCheck> {
        self.check_partition(p)?;
        if !p.is_full() {
            return Err(Error::InvalidArgument(format!(
                "tolerance is defined for full-support partitions, got {}",
                p.label()
            )));
        }
        let mut by_sub = self.is_radon(p)?;
        if by_sub {
            for i in 1..=self.len() {
                if !self.is_radon(&p.without(i))? {
                    by_sub = false;
                    break;
                }
            }
        }
        let by_ridges = lattice.map(|l| l.contains(p) && l.ridge_count(p) == self.len());
        if let Some(r) = by_ridges {
            if r != by_sub {
                return Err(Error::Consistency(format!(
                    "tolerance of {} is {by_sub} by sub-partitions but {r} by ridge count",
                    p.label()
                )));
            }
        }
        Ok(ToleranceCheck {
            partition: *p,
            by_subpartitions: by_sub,
            by_ridges,
        })
    }

    /// All full-support partitions with tolerance, each orientation listed.
    pub fn tolerant_partitions(&self) -> Result<Vec<Partition>> {
        let table = RadonTable::new(self)?;
        Ok(table.tolerant_partitions())
    }

    /// Every Reay triple `(A, B, C)`: pairwise disjoint, each pair Radon.
    /// Each unordered triple is listed once, ordered by smallest index.
    pub fn find_reay(&self) -> Result<Vec<ReayTriple>> {
        let n = self.len();
        if n > MAX_REAY_POINTS {
            return Err(Error::BoundExceeded {
                what: "points",
                value: n,
                limit: MAX_REAY_POINTS,
            });
        }
        let table = RadonTable::new(self)?;
        let mut out = Vec::new();
        for code in 0..1u64 << (2 * n) {
            let (mut a, mut b, mut c) = (0u64, 0u64, 0u64);
            for i in 0..n {
                match code >> (2 * i) & 3 {
                    1 => a |= 1 << i,
                    2 => b |= 1 << i,
                    3 => c |= 1 << i,
                    _ => {}
                }
            }
            if a == 0 || b == 0 || c == 0 {
                continue;
            }
            if !(a.trailing_zeros() < b.trailing_zeros() && b.trailing_zeros() < c.trailing_zeros()) {
                continue;
            }
            if table.is_radon(a, b) && table.is_radon(a, c) && table.is_radon(b, c) {
                out.push(ReayTriple::from_masks(a, b, c));
            }
        }
        out.sort();
        Ok(out)
    }

    /// Whether some Reay triple exists. Enlarging a side keeps every pair
    /// Radon, so it suffices to test splittings of all of `[N]` into three parts.
    pub fn has_reay(&self) -> Result<bool> {
        Ok(RadonTable::new(self)?.has_reay())
    }
}

/// Outcome of a Radon test with its LP margin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadonDecision {
    pub radon: bool,
    pub margin: f64,
    /// Whether the exact rational re-solve decided it.
    pub exact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ToleranceCheck {
    pub partition: Partition,
    pub by_subpartitions: bool,
    /// `None` outside general position, where only sub-partitions are used.
    pub by_ridges: Option<bool>,
}

/// Three pairwise-disjoint index sets, each pair forming a Radon partition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ReayTriple {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
}

impl ReayTriple {
    fn from_masks(a: u64, b: u64, c: u64) -> Self {
        let one_based = |m: u64| mask_indices(m).into_iter().map(|i| i + 1).collect();
        Self {
            a: one_based(a),
            b: one_based(b),
            c: one_based(c),
        }
    }
}

/// Face lattice of a Radon polytope in general position.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceLattice {
    pub n_total: usize,
    pub d: usize,
    pub vertices: Vec<(Partition, SignedVector)>,
    /// `faces_by_dim[g]`: sorted partitions whose face has dimension `g`.
    pub faces_by_dim: Vec<Vec<Partition>>,
}

impl FaceLattice {
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces_by_dim.iter().map(Vec::len).collect()
    }

    pub fn facets(&self) -> &[Partition] {
        self.faces_by_dim.last().map_or(&[], Vec::as_slice)
    }

    fn grade(&self, p: &Partition) -> Option<usize> {
        p.support_size().checked_sub(self.d + 2)
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.grade(p)
            .and_then(|g| self.faces_by_dim.get(g))
            .is_some_and(|level| level.binary_search(p).is_ok())
    }

    /// Faces one dimension below `p` that it contains.
    pub fn ridge_count(&self, p: &Partition) -> usize {
        let Some(g) = self.grade(p).filter(|&g| g >= 1) else {
            return 0;
        };
        self.faces_by_dim[g - 1]
            .iter()
            .filter(|q| p.contains(q))
            .count()
    }

    /// Vertex pairs spanning an edge (index pairs into `vertices`, sorted).
    pub fn edges(&self) -> Result<Vec<(usize, usize)>> {
        let Some(level) = self.faces_by_dim.get(1) else {
            return Ok(Vec::new());
        };
        let mut out = Vec::with_capacity(level.len());
        for e in level {
            let ends: Vec<usize> = self
                .vertices
                .iter()
                .enumerate()
                .filter(|(_, (v, _))| e.contains(v))
                .map(|(i, _)| i)
                .collect();
            let [u, v] = ends[..] else {
                return Err(Error::Consistency(format!(
                    "edge {} contains {} vertices",
                    e.label(),
                    ends.len()
                )));
            };
            out.push((u, v));
        }
        out.sort();
        Ok(out)
    }
}

/// Radon flags for every ordered pair of disjoint subsets, indexed in base 3
/// (digit 1 for `A`, 2 for `B`); built by up-closure of the minimal partitions.
#[derive(Clone, Debug)]
pub struct RadonTable {
    n: usize,
    radon: Vec<bool>,
}

/// `Σ_{i ∈ mask} 3^i` for every mask over [`MAX_TABLE_POINTS`] bits.
fn ternary_table() -> &'static [usize] {
    static TABLE: OnceLock<Vec<usize>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![0usize; 1 << MAX_TABLE_POINTS];
        for m in 1..t.len() {
            let low = m.trailing_zeros();
            t[m] = t[m & (m - 1)] + 3usize.pow(low);
        }
        t
    })
}

/// Sign masks of the circuits on all `(d+2)`-subsets, both orientations,
/// or `None` if any subset is near-degenerate.
fn generic_circuit_signs(points: &[Vec<f64>], d: usize) -> Option<Vec<(u64, u64)>> {
    let n = points.len();
    let rows = d + 1;
    let cols = d + 2;
    let mut m = vec![0.0f64; rows * cols];
    let mut out = Vec::new();
    for mask in subsets_of_size(n, cols) {
        let idx = mask_indices(mask);
        for (j, &i) in idx.iter().enumerate() {
            for c in 0..d {
                m[c * cols + j] = points[i][c];
            }
            m[d * cols + j] = 1.0;
        }
        // eliminate the first d+1 columns; the null vector is (-last column, 1)
        for col in 0..rows {
            let piv = (col..rows).max_by(|&a, &b| m[a * cols + col].abs().total_cmp(&m[b * cols + col].abs()))?;
            let pv = m[piv * cols + col];
            if pv.abs() < 1e-12 {
                return None;
            }
            if piv != col {
                for j in 0..cols {
                    m.swap(piv * cols + j, col * cols + j);
                }
            }
            for j in col..cols {
                m[col * cols + j] /= pv;
            }
            for r in 0..rows {
                if r == col {
                    continue;
                }
                let f = m[r * cols + col];
                if f != 0.0 {
                    for j in col..cols {
                        m[r * cols + j] -= f * m[col * cols + j];
                    }
                }
            }
        }
        let mut max = 1.0f64;
        for r in 0..rows {
            max = max.max(m[r * cols + d + 1].abs());
        }
        let (mut a, mut b) = (1u64 << idx[d + 1], 0u64);
        for (r, &i) in idx.iter().take(rows).enumerate() {
            let v = -m[r * cols + d + 1];
            if v.abs() <= GENERIC_TOL * max {
                return None;
            }
            if v > 0.0 {
                a |= 1 << i;
            } else {
                b |= 1 << i;
            }
        }
        out.push((a, b));
        out.push((b, a));
    }
    Some(out)
}

impl RadonTable {
    pub fn new(cfg: &PointConfig) -> Result<Self> {
        let minimal = cfg.minimal_partitions()?;
        Self::from_minimal(cfg.len(), minimal.iter().map(|(p, _)| (p.a_mask(), p.b_mask())))
    }

    /// The table for raw points, skipping [`PointConfig`] construction when
    /// every `(d+2)`-subset has a clearly signed circuit. Other inputs take
    /// the validated path.
    pub fn from_points(points: &[Vec<f64>], d: usize) -> Result<Self> {
        let n = points.len();
        if n <= MAX_TABLE_POINTS && n >= d + 2 {
            if let Some(masks) = generic_circuit_signs(points, d) {
                return Self::from_minimal(n, masks);
            }
        }
        Self::new(&PointConfig::new(points.to_vec())?)
    }

    /// Up-closure of the given minimal `(A, B)` masks.
    pub fn from_minimal(n: usize, minimal: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        if n > MAX_TABLE_POINTS {
            return Err(Error::BoundExceeded {
                what: "points",
                value: n,
                limit: MAX_TABLE_POINTS,
            });
        }
        let ternary = ternary_table();
        let all = full_mask(n);
        let mut radon = vec![false; 3usize.pow(n as u32)];
        // mark every (A ⊇ a, B ⊇ b) by distributing the free points
        for (a, b) in minimal {
            let free = all & !(a | b);
            let mut x = free;
            loop {
                let rest = free & !x;
                let mut y = rest;
                loop {
                    radon[ternary[(a | x) as usize] + 2 * ternary[(b | y) as usize]] = true;
                    if y == 0 {
                        break;
                    }
                    y = (y - 1) & rest;
                }
                if x == 0 {
                    break;
                }
                x = (x - 1) & free;
            }
        }
        Ok(Self { n, radon })
    }

    pub fn is_radon(&self, a: u64, b: u64) -> bool {
        let t = ternary_table();
        self.radon[t[a as usize] + 2 * t[b as usize]]
    }

    pub fn tolerant_partitions(&self) -> Vec<Partition> {
        let all = full_mask(self.n);
        let mut out = Vec::new();
        for a in 1..all {
            let b = all & !a;
            if !self.is_radon(a, b) {
                continue;
            }
            let tolerant = (0..self.n).all(|i| {
                let keep = !(1u64 << i);
                self.is_radon(a & keep, b & keep)
            });
            if tolerant {
                out.push(Partition::from_masks(self.n, a, b).expect("valid masks"));
            }
        }
        out.sort();
        out
    }

    pub fn has_tolerant_partition(&self) -> bool {
        let all = full_mask(self.n);
        (1..all).any(|a| {
            let b = all & !a;
            self.is_radon(a, b)
                && (0..self.n).all(|i| {
                    let keep = !(1u64 << i);
                    self.is_radon(a & keep, b & keep)
                })
        })
    }

    pub fn has_reay(&self) -> bool {
        let n = self.n;
        if n < 3 {
            return false;
        }
        // point 1 always in A; the others go to A, B or C
        let rest = n - 1;
        for code in 0..3usize.pow(rest as u32) {
            let (mut a, mut b, mut c) = (1u64, 0u64, 0u64);
            let mut x = code;
            for i in 1..n {
                match x % 3 {
                    0 => a |= 1 << i,
                    1 => b |= 1 << i,
                    _ => c |= 1 << i,
                }
                x /= 3;
            }
            if b == 0 || c == 0 || b.trailing_zeros() > c.trailing_zeros() {
                continue;
            }
            if self.is_radon(a, b) && self.is_radon(a, c) && self.is_radon(b, c) {
                return true;
            }
        }
        false
    }
}

fn vertex_pair(n: usize, v: SignedVector) -> (Partition, SignedVector) {
    (sign_partition(n, v.coords()), v)
}

fn sign_partition<T: Scalar>(n: usize, coords: &[T]) -> Partition {
    let (mut a, mut b) = (0u64, 0u64);
    for (i, x) in coords.iter().enumerate() {
        if *x > T::zero() {
            a |= 1 << i;
        } else if *x < T::zero() {
            b |= 1 << i;
        }
    }
    Partition::from_masks(n, a, b).expect("disjoint sign masks")
}

fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// All `k`-subsets of `{0..n}` as bitmasks, in increasing order.
fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit = 1u128 << n;
    let mut cur: Option<u128> = (k <= n).then(|| (1u128 << k) - 1);
    std::iter::from_fn(move || {
        let c = cur?;
        if k == 0 {
            cur = None;
            return Some(0);
        }
        // Gosper's hack
        let low = c & c.wrapping_neg();
        let ripple = c + low;
        let next = (((c ^ ripple) >> 2) / low) | ripple;
        cur = (next < limit).then_some(next);
        Some(c as u64)
    })
}

/// Points `x_i` whose `V` is a uniformly random `(N-d-1)`-subspace of `A_N`:
/// Gram–Schmidt on `𝟙, v_1, ..., v_{N-1}` with Gaussian `v_j` gives
/// `w_0, ..., w_{N-1}`, and `x_i = (w_{N-d}[i], ..., w_{N-1}[i])`.
pub fn sample_subspace(n: usize, d: usize, seed: u64) -> Result<PointConfig> {
    sample_subspace_with(n, d, &mut normals(seed, 0))
}

/// [`sample_subspace`] drawing from the given normal stream.
pub fn sample_subspace_with<R: rand::RngCore>(
    n: usize,
    d: usize,
    normals: &mut Normals<R>,
) -> Result<PointConfig> {
    if n < d + 2 {
        return Err(Error::Domain(format!(
            "subspace sampling needs N >= d + 2, got N = {n}, d = {d}"
        )));
    }
    let mut basis: Vec<Vec<f64>> = vec![vec![1.0 / (n as f64).sqrt(); n]];
    while basis.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| normals.next()).collect();
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for w in &basis {
                let dot: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(w).for_each(|(a, b)| *a -= dot * b);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        basis.push(v);
    }
    let points = (0..n)
        .map(|i| (n - d..n).map(|j| basis[j][i]).collect())
        .collect();
    PointConfig::new(points)
}

/// Reference configurations.
pub mod fixtures {
    use std::f64::consts::TAU;

    use super::PointConfig;
    use crate::error::Result;

    /// `x_i = i` in `R^1`.
    pub fn line(n: usize) -> Result<PointConfig> {
        PointConfig::new((1..=n).map(|i| vec![i as f64]).collect())
    }

    /// `x_i = (cos θ_i, sin θ_i)`, `θ_i = 2π(i-1)/n`.
    pub fn circle(n: usize) -> Result<PointConfig> {
        PointConfig::new(circle_points(n))
    }

    /// Regular pentagon on the unit circle, with the origin as point 6.
    pub fn pentagon_with_center() -> Result<PointConfig> {
        let mut pts = circle_points(5);
        pts.push(vec![0.0, 0.0]);
        PointConfig::new(pts)
    }

    /// `x_i = (i, i², ..., i^d)`.
    pub fn moment_curve(n: usize, d: usize) -> Result<PointConfig> {
        PointConfig::new(
            (1..=n)
                .map(|i| (1..=d).map(|e| (i as f64).powi(e as i32)).collect())
                .collect(),
        )
    }

    fn circle_points(n: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|i| {
                let theta = TAU * i as f64 / n as f64;
                vec![theta.cos(), theta.sin()]
            })
            .collect()
    }
}
