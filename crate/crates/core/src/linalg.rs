//! Exact linear algebra: Smith normal form over `Z` with unimodular
//! transforms, and a sparse Gaussian solver over `Q`.
//!
//! The Smith computation first runs in checked `i64` and restarts in
//! `BigInt` if any intermediate value overflows.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::Rational;

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Which unimodular transforms to record alongside the diagonal.
#[derive(Debug, Clone, Copy, Default)]
pub struct Transforms {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
    pub v_inv: bool,
}

impl Transforms {
    pub const NONE: Transforms = Transforms {
        u: false,
        u_inv: false,
        v: false,
        v_inv: false,
    };
    pub const ALL: Transforms = Transforms {
        u: true,
        u_inv: true,
        v: true,
        v_inv: true,
    };
}

/// `U · M · V = S` with `S` diagonal, `diag[i] | diag[i+1]`, all positive.
#[derive(Debug, Clone)]
pub struct Smith {
    pub rows: usize,
    pub cols: usize,
    pub diag: Vec<BigInt>,
    pub u: Option<IntMatrix>,
    pub u_inv: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub v_inv: Option<IntMatrix>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// Invariant factors different from one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diag.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

trait Entry: Clone + PartialEq + std::fmt::Debug {
    fn nil() -> Self;
    fn unit() -> Self;
    fn from_big(x: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn is_nil(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn cmp_abs(&self, other: &Self) -> Ordering;
    fn quot(&self, d: &Self) -> Self;
    fn divides(&self, x: &Self) -> bool;
    /// `self - q * b`
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
}

impl Entry for i64 {
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i64()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn divides(&self, x: &Self) -> bool {
        x % self == 0
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*b)?)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
}

impl Entry for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn divides(&self, x: &Self) -> bool {
        x.is_multiple_of(self)
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
}

struct Overflow;

fn identity<E: Entry>(n: usize) -> Vec<Vec<E>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { E::unit() } else { E::nil() }).collect())
        .collect()
}

struct Work<E: Entry> {
    a: Vec<Vec<E>>,
    m: usize,
    n: usize,
    u: Option<Vec<Vec<E>>>,
    u_inv: Option<Vec<Vec<E>>>,
    v: Option<Vec<Vec<E>>>,
    v_inv: Option<Vec<Vec<E>>>,
}

fn row_sub<E: Entry>(rows: &mut [Vec<E>], i: usize, j: usize, q: &E) -> Result<(), Overflow> {
    let (ri, rj) = if i < j {
        let (lo, hi) = rows.split_at_mut(j);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(i);
        (&mut hi[0], &lo[j])
    };
    for (x, y) in ri.iter_mut().zip(rj.iter()) {
        if !y.is_nil() {
            *x = x.sub_mul(q, y).ok_or(Overflow)?;
        }
    }
    Ok(())
}

/// column `i` -= q * column `j`
fn col_sub<E: Entry>(rows: &mut [Vec<E>], i: usize, j: usize, q: &E) -> Result<(), Overflow> {
    for r in rows.iter_mut() {
        if !r[j].is_nil() {
            r[i] = r[i].sub_mul(q, &r[j]).ok_or(Overflow)?;
        }
    }
    Ok(())
}

fn col_swap<E: Entry>(rows: &mut [Vec<E>], i: usize, j: usize) {
    for r in rows.iter_mut() {
        r.swap(i, j);
    }
}

impl<E: Entry> Work<E> {
    /// row i -= q row j
    fn row_op(&mut self, i: usize, j: usize, q: &E) -> Result<(), Overflow> {
        row_sub(&mut self.a, i, j, q)?;
        if let Some(u) = self.u.as_mut() {
            row_sub(u, i, j, q)?;
        }
        if let Some(ui) = self.u_inv.as_mut() {
            // inverse update: column j += q column i
            let nq = q.neg().ok_or(Overflow)?;
            col_sub(ui, j, i, &nq)?;
        }
        Ok(())
    }

    /// col i -= q col j
    fn col_op(&mut self, i: usize, j: usize, q: &E) -> Result<(), Overflow> {
        col_sub(&mut self.a, i, j, q)?;
        if let Some(v) = self.v.as_mut() {
            col_sub(v, i, j, q)?;
        }
        if let Some(vi) = self.v_inv.as_mut() {
            // inverse update: row j += q row i
            let nq = q.neg().ok_or(Overflow)?;
            row_sub(vi, j, i, &nq)?;
        }
        Ok(())
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = self.u.as_mut() {
            u.swap(i, j);
        }
        if let Some(ui) = self.u_inv.as_mut() {
            col_swap(ui, i, j);
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        col_swap(&mut self.a, i, j);
        if let Some(v) = self.v.as_mut() {
            col_swap(v, i, j);
        }
        if let Some(vi) = self.v_inv.as_mut() {
            vi.swap(i, j);
        }
    }

    fn row_negate(&mut self, i: usize) -> Result<(), Overflow> {
        for x in self.a[i].iter_mut() {
            *x = x.neg().ok_or(Overflow)?;
        }
        if let Some(u) = self.u.as_mut() {
            for x in u[i].iter_mut() {
                *x = x.neg().ok_or(Overflow)?;
            }
        }
        if let Some(ui) = self.u_inv.as_mut() {
            for r in ui.iter_mut() {
                r[i] = r[i].neg().ok_or(Overflow)?;
            }
        }
        Ok(())
    }

    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m {
            for j in t..self.n {
                let x = &self.a[i][j];
                if x.is_nil() {
                    continue;
                }
                if x.is_unit() {
                    return Some((i, j));
                }
                match best {
                    Some((bi, bj)) if self.a[bi][bj].cmp_abs(x) != Ordering::Greater => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn run(&mut self) -> Result<Vec<E>, Overflow> {
        let mut diag = Vec::new();
        let mut t = 0;
        while t < self.m.min(self.n) {
            let Some((pi, pj)) = self.find_pivot(t) else {
                break;
            };
            self.row_swap(t, pi);
            self.col_swap(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..self.m {
                    if !self.a[i][t].is_nil() {
                        let q = self.a[i][t].quot(&self.a[t][t]);
                        self.row_op(i, t, &q)?;
                        if !self.a[i][t].is_nil() {
                            clean = false;
                        }
                    }
                }
                for j in t + 1..self.n {
                    if !self.a[t][j].is_nil() {
                        let q = self.a[t][j].quot(&self.a[t][t]);
                        self.col_op(j, t, &q)?;
                        if !self.a[t][j].is_nil() {
                            clean = false;
                        }
                    }
                }
                if !clean {
                    // move the smallest remainder in row/column t to the pivot
                    let mut best = (t, t);
                    for i in t + 1..self.m {
                        let x = &self.a[i][t];
                        if !x.is_nil() && x.cmp_abs(&self.a[best.0][best.1]) == Ordering::Less {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..self.n {
                        let x = &self.a[t][j];
                        if !x.is_nil() && x.cmp_abs(&self.a[best.0][best.1]) == Ordering::Less {
                            best = (t, j);
                        }
                    }
                    self.row_swap(t, best.0);
                    self.col_swap(t, best.1);
                    continue;
                }
                if self.a[t][t].is_unit() {
                    break;
                }
                let piv = self.a[t][t].clone();
                let bad = (t + 1..self.m).find(|&i| {
                    self.a[i][t + 1..].iter().any(|x| !x.is_nil() && !piv.divides(x))
                });
                match bad {
                    Some(i) => self.row_op(t, i, &E::unit().neg().ok_or(Overflow)?)?,
                    None => break,
                }
            }
            if self.a[t][t].is_neg() {
                self.row_negate(t)?;
            }
            diag.push(self.a[t][t].clone());
            t += 1;
        }
        Ok(diag)
    }
}

fn smith_with<E: Entry>(m: &IntMatrix, rows: usize, cols: usize, tr: Transforms) -> Option<Smith> {
    let a: Option<Vec<Vec<E>>> = m
        .iter()
        .map(|r| r.iter().map(E::from_big).collect::<Option<Vec<E>>>())
        .collect();
    let mut w = Work {
        a: a?,
        m: rows,
        n: cols,
        u: tr.u.then(|| identity(rows)),
        u_inv: tr.u_inv.then(|| identity(rows)),
        v: tr.v.then(|| identity(cols)),
        v_inv: tr.v_inv.then(|| identity(cols)),
    };
    let diag = w.run().ok()?;
    let conv = |x: Option<Vec<Vec<E>>>| {
        x.map(|mm| {
            mm.into_iter()
                .map(|r| r.iter().map(Entry::to_big).collect())
                .collect()
        })
    };
    Some(Smith {
        rows,
        cols,
        diag: diag.iter().map(Entry::to_big).collect(),
        u: conv(w.u),
        u_inv: conv(w.u_inv),
        v: conv(w.v),
        v_inv: conv(w.v_inv),
    })
}

/// Smith normal form of a `rows × cols` matrix.
pub fn smith(m: &IntMatrix, rows: usize, cols: usize, tr: Transforms) -> Smith {
    debug_assert_eq!(m.len(), rows);
    smith_with::<i64>(m, rows, cols, tr)
        .or_else(|| smith_with::<BigInt>(m, rows, cols, tr))
        .expect("bigint Smith form cannot overflow")
}

pub fn mat_vec(m: &IntMatrix, x: &[Rational]) -> Vec<Rational> {
    m.iter()
        .map(|r| {
            r.iter()
                .zip(x)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(Rational::zero(), |acc, (a, b)| acc + b * a)
        })
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix, inner: usize, cols: usize) -> IntMatrix {
    a.iter()
        .map(|r| {
            let mut out = vec![BigInt::zero(); cols];
            for k in 0..inner {
                if r[k].is_zero() {
                    continue;
                }
                for (o, y) in out.iter_mut().zip(&b[k]) {
                    if !y.is_zero() {
                        *o += &r[k] * y;
                    }
                }
            }
            out
        })
        .collect()
}

/// Sparse row: sorted `(column, coefficient)` pairs with nonzero coefficients.
pub type SparseRow = Vec<(usize, Rational)>;

fn axpy(row: &SparseRow, c: &Rational, piv: &SparseRow) -> SparseRow {
    // row - c * piv
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < piv.len() {
        let take = match (row.get(i), piv.get(j)) {
            (Some(a), Some(b)) => a.0.cmp(&b.0),
            (Some(_), None) => Ordering::Less,
            _ => Ordering::Greater,
        };
        match take {
            Ordering::Less => {
                out.push(row[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push((piv[j].0, -(c * &piv[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let v = &row[i].1 - c * &piv[j].1;
                if !v.is_zero() {
                    out.push((row[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Solves `M x = b` over `Q` for a sparse `M` given by rows; free variables
/// are set to zero. Returns `None` when the system is inconsistent.
pub fn solve_sparse(ncols: usize, rows: &[SparseRow], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let mut pivots: Vec<Option<(SparseRow, Rational)>> = vec![None; ncols];
    for (row, b) in rows.iter().zip(rhs) {
        let mut row = row.clone();
        let mut b = b.clone();
        loop {
            let Some((lead, c)) = row.first().cloned() else {
                if !b.is_zero() {
                    return None;
                }
                break;
            };
            match &pivots[lead] {
                Some((p, pb)) => {
                    b -= &c * pb;
                    row = axpy(&row, &c, p);
                }
                None => {
                    let inv = c.recip();
                    let row: SparseRow = row.into_iter().map(|(j, v)| (j, v * &inv)).collect();
                    pivots[lead] = Some((row, b * inv));
                    break;
                }
            }
        }
    }
    let mut x = vec![Rational::zero(); ncols];
    for lead in (0..ncols).rev() {
        if let Some((p, b)) = &pivots[lead] {
            let mut v = b.clone();
            for (j, c) in &p[1..] {
                if !x[*j].is_zero() {
                    v -= c * &x[*j];
                }
            }
            x[lead] = v;
        }
    }
    Some(x)
}

/// Rank over `Q` of a sparse matrix.
pub fn rank_sparse(ncols: usize, rows: &[SparseRow]) -> usize {
    let mut pivots: Vec<Option<SparseRow>> = vec![None; ncols];
    let mut rank = 0;
    for row in rows {
        let mut row = row.clone();
        while let Some((lead, c)) = row.first().cloned() {
            match &pivots[lead] {
                Some(p) => row = axpy(&row, &c, p),
                None => {
                    let inv = c.recip();
                    pivots[lead] = Some(row.into_iter().map(|(j, v)| (j, v * &inv)).collect());
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}
