#![allow(dead_code)]

use std::ops::{Add, Mul};

use fibtree::shift::{Alphabet, BinaryMatrix, MarkovFibSpec, Provenance, Triple};
use num_rational::Ratio;
use rand::Rng;

pub type Q = Ratio<i64>;

/// All 2x2 binary matrices, row-major bit order.
pub fn binary_2x2() -> Vec<BinaryMatrix> {
    (0..16u8)
        .map(|m| {
            let rows = vec![vec![m & 1, (m >> 1) & 1], vec![(m >> 2) & 1, (m >> 3) & 1]];
            BinaryMatrix::new(&rows).unwrap()
        })
        .collect()
}

/// Vertex spec built directly from the matrix product, without pruning.
pub fn raw_vertex_spec(a1: &BinaryMatrix, a2: &BinaryMatrix) -> MarkovFibSpec {
    let k = a1.dim();
    let mut triples = Vec::new();
    for i in 0..k {
        for j1 in 0..k {
            for j2 in 0..k {
                if a1.get(i, j1) && a2.get(i, j2) {
                    triples.push((i, j1, j2));
                }
            }
        }
    }
    MarkovFibSpec::unpruned(
        Alphabet::numbered(k),
        triples,
        Provenance::VertexMatrices {
            a1: a1.clone(),
            a2: a2.clone(),
        },
    )
    .unwrap()
}

pub fn golden_matrix() -> BinaryMatrix {
    BinaryMatrix::new(&[vec![1, 1], vec![1, 0]]).unwrap()
}

pub fn random_triples<R: Rng>(rng: &mut R, k: usize, density: f64) -> Vec<Triple> {
    let mut out = Vec::new();
    for i in 0..k {
        for a in 0..k {
            for b in 0..k {
                if rng.gen_bool(density) {
                    out.push((i, a, b));
                }
            }
        }
    }
    out
}

pub fn random_raw_spec<R: Rng>(rng: &mut R, max_k: usize) -> MarkovFibSpec {
    let k = rng.gen_range(1..=max_k);
    let density = rng.gen_range(0.2..0.9);
    MarkovFibSpec::unpruned(Alphabet::numbered(k), random_triples(rng, k, density), Provenance::Raw).unwrap()
}

/// Characteristic polynomial `det(xI - M)` by Faddeev-LeVerrier, as
/// coefficients from the constant term up; the leading coefficient is 1.
pub fn char_poly(m: &[Vec<i64>]) -> Vec<Q> {
    let n = m.len();
    let mq: Vec<Vec<Q>> = m.iter().map(|r| r.iter().map(|&v| Q::from_integer(v)).collect()).collect();
    let mut coeffs = vec![Q::from_integer(0); n + 1];
    coeffs[n] = Q::from_integer(1);
    let mut mk = vec![vec![Q::from_integer(0); n]; n];
    for k in 1..=n {
        // mk = M * mk + c_{n-k+1} I
        let mut next = matmul(&mq, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += coeffs[n - k + 1];
        }
        mk = next;
        let am = matmul(&mq, &mk);
        let trace: Q = (0..n).map(|i| am[i][i]).fold(Q::from_integer(0), |a, b| a + b);
        coeffs[n - k] = -trace / Q::from_integer(k as i64);
    }
    coeffs
}

fn matmul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|l| a[i][l] * b[l][j]).fold(Q::from_integer(0), |x, y| x + y))
                .collect()
        })
        .collect()
}

/// `a + b * sqrt(5)` with rational parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QSqrt5 {
    pub a: Q,
    pub b: Q,
}

impl QSqrt5 {
    pub fn rational(a: Q) -> Self {
        QSqrt5 { a, b: Q::from_integer(0) }
    }

    pub fn is_zero(&self) -> bool {
        self.a == Q::from_integer(0) && self.b == Q::from_integer(0)
    }

    pub fn to_f64(self) -> f64 {
        let f = |q: Q| *q.numer() as f64 / *q.denom() as f64;
        f(self.a) + f(self.b) * 5f64.sqrt()
    }
}

impl Add for QSqrt5 {
    type Output = QSqrt5;
    fn add(self, o: QSqrt5) -> QSqrt5 {
        QSqrt5 { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Mul for QSqrt5 {
    type Output = QSqrt5;
    fn mul(self, o: QSqrt5) -> QSqrt5 {
        QSqrt5 {
            a: self.a * o.a + Q::from_integer(5) * self.b * o.b,
            b: self.a * o.b + self.b * o.a,
        }
    }
}

/// The golden mean `(1 + sqrt 5) / 2` and its conjugate.
pub fn golden_exact() -> (QSqrt5, QSqrt5) {
    let half = Q::new(1, 2);
    (QSqrt5 { a: half, b: half }, QSqrt5 { a: half, b: -half })
}

/// Horner evaluation of a rational polynomial at an element of Q(sqrt 5).
pub fn eval_poly(coeffs: &[Q], x: QSqrt5) -> QSqrt5 {
    coeffs
        .iter()
        .rev()
        .fold(QSqrt5::rational(Q::from_integer(0)), |acc, &c| acc * x + QSqrt5::rational(c))
}

pub fn max_abs_eigenvalue(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mat = nalgebra::DMatrix::from_fn(n, n, |i, j| m[i][j]);
    let radius = |x: nalgebra::DMatrix<f64>| {
        nalgebra::Schur::try_new(x, f64::EPSILON, 10_000)
            .map(|s| s.complex_eigenvalues().iter().map(|c| c.norm()).fold(0.0, f64::max))
    };
    // unbounded QR can cycle; the transpose and a unit shift are fallbacks,
    // the shift being exact for nonnegative input
    radius(mat.clone())
        .or_else(|| radius(mat.transpose()))
        .or_else(|| radius(&mat + nalgebra::DMatrix::identity(n, n)).map(|r| r - 1.0))
        .unwrap_or_else(|| panic!("eigen solver did not converge on {m:?}"))
}

pub fn mixed_subsystem_matrix() -> Vec<Vec<i64>> {
    vec![vec![1, 1, 0, 0], vec![1, 0, 0, 0], vec![1, 0, 0, 1], vec![0, 0, 1, 0]]
}
