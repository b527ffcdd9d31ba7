//! Ordered partitions in `[N]`, the partition cones `C(A,B)` and faces
//! `F(A,B)` they index, and the inclusion–exclusion weights used by the
//! general intrinsic-volume engine.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{Scalar, FLOAT_MEMBERSHIP_TOL};

/// Largest supported number of points.
pub const MAX_POINTS: usize = 64;

/// An ordered pair `(A, B)` of disjoint subsets of `[N] = {1, ..., N}`.
///
/// `A` holds the indices with positive coefficients, `B` the negative ones.
/// Either side may be empty, in which case the cone `C(A,B)` is `{0}`.
/// Stored as bitmasks (bit `i-1` for index `i`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Partition {
    n_total: usize,
    a: u64,
    b: u64,
}

impl Partition {
    /// Builds a partition from 1-based index lists.
    pub fn new(n_total: usize, a: &[usize], b: &[usize]) -> Result<Self> {
        check_n(n_total)?;
        let a = mask_of(n_total, a)?;
        let b = mask_of(n_total, b)?;
        Self::from_masks(n_total, a, b)
    }

    pub fn from_masks(n_total: usize, a: u64, b: u64) -> Result<Self> {
        check_n(n_total)?;
        let all = full_mask(n_total);
        if let Some(bad) = first_index((a | b) & !all) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                n: n_total,
            });
        }
        if let Some(dup) = first_index(a & b) {
            return Err(Error::Overlap { index: dup });
        }
        Ok(Self { n_total, a, b })
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn a_mask(&self) -> u64 {
        self.a
    }

    pub fn b_mask(&self) -> u64 {
        self.b
    }

    /// Sorted 1-based indices of `A`.
    pub fn a(&self) -> Vec<usize> {
        indices(self.a)
    }

    /// Sorted 1-based indices of `B`.
    pub fn b(&self) -> Vec<usize> {
        indices(self.b)
    }

    pub fn a_len(&self) -> usize {
        self.a.count_ones() as usize
    }

    pub fn b_len(&self) -> usize {
        self.b.count_ones() as usize
    }

    pub fn support_mask(&self) -> u64 {
        self.a | self.b
    }

    /// `|A| + |B|`.
    pub fn support_size(&self) -> usize {
        (self.a | self.b).count_ones() as usize
    }

    /// `A ∪ B = [N]`.
    pub fn is_full(&self) -> bool {
        self.support_mask() == full_mask(self.n_total)
    }

    /// The cone is `{0}` when either side is empty.
    pub fn is_zero_cone(&self) -> bool {
        self.a == 0 || self.b == 0
    }

    /// `(B, A)`.
    pub fn reversed(&self) -> Self {
        Self {
            n_total: self.n_total,
            a: self.b,
            b: self.a,
        }
    }

    /// Component-wise containment: `other.A ⊆ self.A` and `other.B ⊆ self.B`.
    pub fn contains(&self, other: &Partition) -> bool {
        other.a & !self.a == 0 && other.b & !self.b == 0
    }

    /// `C(A1,B1) ∩ C(A2,B2) = C(A1 ∩ A2, B1 ∩ B2)`.
    pub fn intersect(&self, other: &Partition) -> Result<Partition> {
        self.check_same_n(other.n_total)?;
        Ok(Self {
            n_total: self.n_total,
            a: self.a & other.a,
            b: self.b & other.b,
        })
    }

    /// Removes index `i` from whichever side holds it.
    pub fn without(&self, i: usize) -> Partition {
        let bit = 1u64 << (i - 1);
        Self {
            n_total: self.n_total,
            a: self.a & !bit,
            b: self.b & !bit,
        }
    }

    /// Whether `alpha` lies in the cone `C(A,B)`: nonnegative on `A`,
    /// nonpositive on `B`, zero elsewhere.
    pub fn cone_contains<T: Scalar>(&self, alpha: &SignedVector<T>) -> Result<bool> {
        self.check_same_n(alpha.len())?;
        let tol = FLOAT_MEMBERSHIP_TOL;
        for (i, x) in alpha.coords().iter().enumerate() {
            let bit = 1u64 << i;
            let ok = if self.a & bit != 0 {
                x.clone() >= T::zero() || x.is_negligible(tol)
            } else if self.b & bit != 0 {
                x.clone() <= T::zero() || x.is_negligible(tol)
            } else {
                x.is_negligible(tol)
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `alpha` lies on the face `F(A,B)`: in the cone, with
    /// `Σ_{i∈A} α_i = 1 = -Σ_{j∈B} α_j`.
    pub fn face_contains<T: Scalar>(&self, alpha: &SignedVector<T>) -> Result<bool> {
        if !self.cone_contains(alpha)? {
            return Ok(false);
        }
        let mut pos = T::zero();
        let mut neg = T::zero();
        for (i, x) in alpha.coords().iter().enumerate() {
            if self.a & (1u64 << i) != 0 {
                pos = pos + x.clone();
            } else if self.b & (1u64 << i) != 0 {
                neg = neg - x.clone();
            }
        }
        let tol = FLOAT_MEMBERSHIP_TOL * self.n_total as f64;
        Ok((pos - T::one()).is_negligible(tol) && (neg - T::one()).is_negligible(tol))
    }

    /// Label in the `"A,B"` shorthand, e.g. `"13,2"`.
    ///
    /// Indices are concatenated when `N <= 9` and dot-separated otherwise.
    pub fn label(&self) -> String {
        let side = |m: u64| {
            let idx = indices(m);
            let parts: Vec<String> = idx.iter().map(usize::to_string).collect();
            if self.n_total <= 9 {
                parts.concat()
            } else {
                parts.join(".")
            }
        };
        format!("{},{}", side(self.a), side(self.b))
    }

    /// Parses a label produced by [`Partition::label`].
    pub fn parse_label(n_total: usize, label: &str) -> Result<Self> {
        let (a, b) = label
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("partition label {label:?} lacks a comma")))?;
        let side = |s: &str| -> Result<Vec<usize>> {
            if s.is_empty() {
                return Ok(Vec::new());
            }
            if n_total <= 9 && !s.contains('.') {
                s.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| Error::Parse(format!("bad index {c:?} in {label:?}")))
                    })
                    .collect()
            } else {
                s.split('.')
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad index {t:?} in {label:?}")))
                    })
                    .collect()
            }
        };
        Self::new(n_total, &side(a.trim())?, &side(b.trim())?)
    }

    fn check_same_n(&self, n: usize) -> Result<()> {
        if n == self.n_total {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n_total,
                found: n,
            })
        }
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n_total
            .cmp(&other.n_total)
            .then_with(|| self.a().cmp(&other.a()))
            .then_with(|| self.b().cmp(&other.b()))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Serialize, Deserialize)]
struct PartitionRepr {
    n: usize,
    a: Vec<usize>,
    b: Vec<usize>,
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PartitionRepr {
            n: self.n_total,
            a: self.a(),
            b: self.b(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PartitionRepr::deserialize(d)?;
        Partition::new(r.n, &r.a, &r.b).map_err(serde::de::Error::custom)
    }
}

/// `(N, label)` pair, e.g. `"5:14,3"`.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, label) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected N:label, got {s:?}")))?;
        let n = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad N in {s:?}")))?;
        Self::parse_label(n, label)
    }
}

fn check_n(n: usize) -> Result<()> {
    if (1..=MAX_POINTS).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "number of points must be in 1..={MAX_POINTS}, got {n}"
        )))
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn mask_of(n: usize, idx: &[usize]) -> Result<u64> {
    let mut m = 0u64;
    for &i in idx {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        m |= 1u64 << (i - 1);
    }
    Ok(m)
}

fn first_index(m: u64) -> Option<usize> {
    (m != 0).then(|| m.trailing_zeros() as usize + 1)
}

pub(crate) fn indices(mut m: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        out.push(m.trailing_zeros() as usize + 1);
        m &= m - 1;
    }
    out
}

/// A point of `A_N`: `N` coordinates summing to zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignedVector<T = f64> {
    coords: Vec<T>,
}

impl<T: Scalar> SignedVector<T> {
    /// Validates the zero-sum condition (exact for rationals, within
    /// `1e-12·N` for floats).
    pub fn new(coords: Vec<T>) -> Result<Self> {
        let sum = coords.iter().cloned().fold(T::zero(), |acc, x| acc + x);
        if !sum.is_negligible(FLOAT_MEMBERSHIP_TOL * coords.len().max(1) as f64) {
            return Err(Error::InvalidArgument(format!(
                "coordinates sum to {:e}, not 0",
                sum.to_f64()
            )));
        }
        Ok(Self { coords })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            coords: vec![T::zero(); n],
        }
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn negated(&self) -> Self {
        Self {
            // 0 - x rather than -x keeps zeros unsigned
            coords: self.coords.iter().map(|x| T::zero() - x.clone()).collect(),
        }
    }

    pub fn scaled(&self, factor: &T) -> Self {
        Self {
            coords: self.coords.iter().map(|x| x.clone() * factor.clone()).collect(),
        }
    }

    pub fn to_f64(&self) -> SignedVector<f64> {
        SignedVector {
            coords: self.coords.iter().map(Scalar::to_f64).collect(),
        }
    }
}

/// Closed form of the inclusion–exclusion weight `σ(m; t, u)`:
/// `(-1)^(u-t) · C(m,t) · C(m-t, u-t)`.
///
/// `σ(m; t, u)` is the signed count `Σ (-1)^(|𝒞'|+1)` over nonempty
/// collections `𝒞'` of distinct nonempty subsets of `[m]` whose intersection
/// has `t` elements and whose union has `u`. It is checked against
/// [`brute_force_weight`] for every `m <= 4`.
pub fn subcollection_weight(m: usize, t: usize, u: usize) -> Result<i64> {
    check_weight_args(m, t, u)?;
    let sign = if (u - t).is_multiple_of(2) { 1 } else { -1 };
    Ok(sign * binom_i64(m, t) * binom_i64(m - t, u - t))
}

/// Largest `m` accepted by [`brute_force_weight`].
pub const BRUTE_FORCE_MAX_M: usize = 4;

/// `σ(m; t, u)` by direct enumeration of all `2^(2^m - 1) - 1` collections.
pub fn brute_force_weight(m: usize, t: usize, u: usize) -> Result<i64> {
    check_weight_args(m, t, u)?;
    if m > BRUTE_FORCE_MAX_M {
        return Err(Error::BoundExceeded {
            what: "m",
            value: m,
            limit: BRUTE_FORCE_MAX_M,
        });
    }
    Ok(WeightTable::brute_force(m)?.get(t, u))
}

fn check_weight_args(m: usize, t: usize, u: usize) -> Result<()> {
    if m == 0 || t == 0 || t > u || u > m {
        return Err(Error::InvalidArgument(format!(
            "weight σ(m;t,u) needs 1 <= t <= u <= m, got m={m}, t={t}, u={u}"
        )));
    }
    Ok(())
}

fn binom_i64(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// All weights `σ(m; t, u)` for `1 <= t <= u <= m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTable {
    m: usize,
    entries: Vec<((usize, usize), i64)>,
}

impl WeightTable {
    /// From the closed form.
    pub fn new(m: usize) -> Result<Self> {
        let mut entries = Vec::new();
        for t in 1..=m {
            for u in t..=m {
                entries.push(((t, u), subcollection_weight(m, t, u)?));
            }
        }
        Ok(Self { m, entries })
    }

    /// By enumeration; `m <= 4`.
    pub fn brute_force(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("m must be positive".into()));
        }
        if m > BRUTE_FORCE_MAX_M {
            return Err(Error::BoundExceeded {
                what: "m",
                value: m,
                limit: BRUTE_FORCE_MAX_M,
            });
        }
        // nonempty subsets of [m] as bitmasks
        let sets: Vec<u32> = (1u32..(1 << m)).collect();
        let mut acc = vec![vec![0i64; m + 1]; m + 1];
        let n_collections = 1u64 << sets.len();
        for coll in 1..n_collections {
            let mut inter = u32::MAX;
            let mut union = 0u32;
            for (j, s) in sets.iter().enumerate() {
                if coll >> j & 1 == 1 {
                    inter &= s;
                    union |= s;
                }
            }
            let t = inter.count_ones() as usize;
            let u = union.count_ones() as usize;
            if t == 0 {
                continue;
            }
            let sign = if coll.count_ones() % 2 == 1 { 1 } else { -1 };
            acc[t][u] += sign;
        }
        let mut entries = Vec::new();
        for (t, row) in acc.iter().enumerate().skip(1) {
            for (u, &w) in row.iter().enumerate().skip(t) {
                entries.push(((t, u), w));
            }
        }
        Ok(Self { m, entries })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Weight for `(t, u)`; zero outside the table.
    pub fn get(&self, t: usize, u: usize) -> i64 {
        self.entries
            .iter()
            .find(|(k, _)| *k == (t, u))
            .map_or(0, |(_, w)| *w)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.entries.iter().map(|&((t, u), w)| (t, u, w))
    }
}
