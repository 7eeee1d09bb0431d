//! Reference computations shared by the integration tests. Nothing here calls
//! into the solvers under test.

#![allow(dead_code, clippy::assign_op_pattern, clippy::needless_range_loop)]

pub mod docs;

use invspec::neumann::Potential;
use invspec::C64;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twofloat::TwoFloat;

pub type Dd = TwoFloat;
pub type CDd = Complex<TwoFloat>;

/// `π² a_n(1/(2π²))`: Neumann eigenvalues of `q = cos(2πx)` from Mathieu
/// characteristic values (scipy.special.mathieu_a).
pub const COS_EIGENVALUES: [f64; 6] = [
    -0.012661594814409243,
    10.36641802202632,
    39.488968308260745,
    88.8280428442924,
    157.91451479320668,
    246.7406377426782,
];

/// Same for `q = 0.01 cos(2πx)`.
pub const SMALL_COS_EIGENVALUES: [f64; 3] =
    [-1.26651475997683e-06, 9.874604084440607, 39.47841865978723];

/// Real zero of `Δ` for `A ≡ 1`, from a 50-digit mpmath root solve.
pub const REAL_ROOT_A0_ONE: f64 = 1.4455749111515480804775026435778;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Piecewise-linear potential on the nodes `k/10` with values uniform in
/// `[-amplitude, amplitude]`.
pub fn random_grid_potential(rng: &mut ChaCha8Rng, amplitude: f64) -> Potential {
    let nodes: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let values = (0..=10)
        .map(|_| rng.gen_range(-amplitude..=amplitude))
        .collect();
    Potential::Grid { nodes, values }
}

pub fn random_coeffs(rng: &mut ChaCha8Rng, degree: usize, bound: f64) -> Vec<f64> {
    (0..=degree)
        .map(|_| rng.gen_range(-bound..=bound))
        .collect()
}

pub fn random_complex(rng: &mut ChaCha8Rng, re: f64, im: f64) -> C64 {
    C64::new(rng.gen_range(-re..=re), rng.gen_range(-im..=im))
}

/// Pointwise value of a potential, written out independently of the crate.
pub fn potential_at(q: &Potential, x: f64) -> f64 {
    match q {
        Potential::Constant { c } => *c,
        Potential::Cosine {
            amplitude,
            frequency,
        } => amplitude * (2.0 * std::f64::consts::PI * frequency * x).cos(),
        Potential::PolyInX { coeffs } => coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * x.powi(k as i32))
            .sum(),
        Potential::Grid { nodes, values } => {
            let j = nodes
                .iter()
                .rposition(|&t| t <= x)
                .unwrap_or(0)
                .min(nodes.len() - 2);
            let t = (x - nodes[j]) / (nodes[j + 1] - nodes[j]);
            values[j] * (1.0 - t) + values[j + 1] * t
        }
    }
}

/// Symmetric tridiagonal form of the ghost-point Neumann discretization of
/// `-y'' + q y` on `intervals + 1` nodes.
struct Tridiagonal {
    diag: Vec<f64>,
    off_sq: Vec<f64>,
}

impl Tridiagonal {
    fn neumann(q: &Potential, intervals: usize) -> Self {
        let h = 1.0 / intervals as f64;
        let h2 = h * h;
        let diag = (0..=intervals)
            .map(|i| 2.0 / h2 + potential_at(q, i as f64 * h))
            .collect();
        let mut off_sq = vec![1.0 / (h2 * h2); intervals];
        off_sq[0] = 2.0 / (h2 * h2);
        off_sq[intervals - 1] = 2.0 / (h2 * h2);
        Self { diag, off_sq }
    }

    /// Number of eigenvalues below `mu` (Sturm sequence of pivots).
    fn count_below(&self, mu: f64) -> usize {
        let mut count = 0;
        let mut pivot = self.diag[0] - mu;
        for i in 0..self.diag.len() {
            if i > 0 {
                pivot = self.diag[i] - mu - self.off_sq[i - 1] / pivot;
            }
            if pivot == 0.0 {
                pivot = -1e-300;
            }
            if pivot < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn eigenvalue(&self, n: usize, lo: f64, hi: f64) -> f64 {
        let (mut lo, mut hi) = (lo, hi);
        assert!(self.count_below(lo) <= n && self.count_below(hi) > n);
        while hi - lo > 1e-15 * hi.abs().max(1.0) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > n {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

fn potential_range(q: &Potential) -> (f64, f64) {
    let samples: Vec<f64> = (0..=2000)
        .map(|i| potential_at(q, i as f64 / 2000.0))
        .collect();
    let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// First `count` eigenvalues of the finite-difference matrix.
pub fn fd_eigenvalues(q: &Potential, count: usize, intervals: usize) -> Vec<f64> {
    let t = Tridiagonal::neumann(q, intervals);
    let (qmin, qmax) = potential_range(q);
    (0..count)
        .map(|n| {
            let free = (n as f64 * std::f64::consts::PI).powi(2);
            t.eigenvalue(n, qmin - 1.0, free + qmax + 1.0)
        })
        .collect()
}

/// Richardson extrapolation `(4 λ(h/2) - λ(h)) / 3` from 4001 and 8001 nodes.
pub fn fd_richardson(q: &Potential, count: usize) -> Vec<f64> {
    richardson_pair(q, count, 4000)
}

pub fn richardson_pair(q: &Potential, count: usize, coarse: usize) -> Vec<f64> {
    let a = fd_eigenvalues(q, count, coarse);
    let b = fd_eigenvalues(q, count, 2 * coarse);
    a.iter().zip(&b).map(|(x, y)| (4.0 * y - x) / 3.0).collect()
}

/// Simpson mean of a potential on 2000 panels.
pub fn oracle_mean(q: &Potential) -> f64 {
    let n = 2000;
    let h = 1.0 / n as f64;
    let mut s = potential_at(q, 0.0) + potential_at(q, 1.0);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * potential_at(q, i as f64 * h);
    }
    s * h / 3.0
}

pub fn dd(x: f64) -> Dd {
    TwoFloat::from(x)
}

pub fn cdd(z: C64) -> CDd {
    Complex::new(dd(z.re), dd(z.im))
}

pub fn to_c64(z: CDd) -> C64 {
    C64::new(z.re.hi() + z.re.lo(), z.im.hi() + z.im.lo())
}

fn cdd_abs2(z: &CDd) -> Dd {
    z.re * z.re + z.im * z.im
}

/// `Σ a_k z^k` with every power formed by repeated multiplication in
/// double-double arithmetic.
pub fn power_sum(coeffs: &[C64], z: C64) -> C64 {
    let zz = cdd(z);
    let mut power = Complex::new(dd(1.0), dd(0.0));
    let mut sum = Complex::new(dd(0.0), dd(0.0));
    for &c in coeffs {
        sum = sum + cdd(c) * power;
        power = power * zz;
    }
    to_c64(sum)
}

/// Solves `Σ_k c_k x_i^k = v_i` by Gaussian elimination with partial
/// pivoting on the explicit Vandermonde matrix, in double-double arithmetic.
pub fn vandermonde_gauss_dd(nodes: &[C64], values: &[C64]) -> Vec<C64> {
    let n = nodes.len();
    let mut m: Vec<Vec<CDd>> = nodes
        .iter()
        .zip(values)
        .map(|(&x, &v)| {
            let x = cdd(x);
            let mut row = Vec::with_capacity(n + 1);
            let mut p = Complex::new(dd(1.0), dd(0.0));
            for _ in 0..n {
                row.push(p);
                p = p * x;
            }
            row.push(cdd(v));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                cdd_abs2(&m[i][col])
                    .partial_cmp(&cdd_abs2(&m[j][col]))
                    .unwrap()
            })
            .unwrap();
        m.swap(col, pivot);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..=n {
                let t = m[col][c];
                m[r][c] = m[r][c] - f * t;
            }
        }
    }
    let mut x = vec![Complex::new(dd(0.0), dd(0.0)); n];
    for r in (0..n).rev() {
        let mut s = m[r][n];
        for c in r + 1..n {
            s = s - m[r][c] * x[c];
        }
        x[r] = s / m[r][r];
    }
    x.into_iter().map(to_c64).collect()
}

/// `Δ(λ) = (e^{2λ} - e^λ)/λ + A(λ)(2e^λ - e^{2λ})` for real `λ ≠ 0` and real
/// coefficients, in double-double arithmetic.
pub fn delta_real_dd(coeffs: &[f64], lambda: Dd) -> Dd {
    let e = lambda.exp();
    let e2 = e * e;
    let mut a = dd(0.0);
    for &c in coeffs.iter().rev() {
        a = a * lambda + dd(c);
    }
    (e2 - e) / lambda + a * (dd(2.0) * e - e2)
}

/// Bisection of a sign change of `f` on `[lo, hi]` to double-double width.
pub fn bisect_dd(f: impl Fn(Dd) -> Dd, lo: f64, hi: f64) -> Dd {
    let (mut lo, mut hi) = (dd(lo), dd(hi));
    let flo = f(lo);
    assert!(flo.hi() * f(hi).hi() < 0.0, "no sign change");
    let lo_negative = flo.hi() < 0.0;
    for _ in 0..110 {
        let mid = (lo + hi) / dd(2.0);
        if (f(mid).hi() < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / dd(2.0)
}

/// Connected components of the graph joining points closer than `radius`,
/// found by breadth-first search and replaced by their weighted means; the
/// means are clustered again until no two are within `radius`.
pub fn clusters_bfs(values: &[C64], radius: f64) -> Vec<(C64, usize)> {
    let mut points: Vec<(C64, usize)> = values.iter().map(|&z| (z, 1)).collect();
    loop {
        let n = points.len();
        let mut seen = vec![false; n];
        let mut next = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut queue = std::collections::VecDeque::from([start]);
            let (mut sum, mut weight) = (C64::new(0.0, 0.0), 0);
            while let Some(i) = queue.pop_front() {
                sum += points[i].0 * points[i].1 as f64;
                weight += points[i].1;
                for j in 0..n {
                    if !seen[j] && (points[i].0 - points[j].0).norm() <= radius {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
            next.push((sum / weight as f64, weight));
        }
        let stable = next.len() == points.len();
        points = next;
        if stable {
            return points;
        }
    }
}

/// Central difference `(f(z + h) - f(z - h)) / 2h` along the real direction.
pub fn central_difference(f: impl Fn(C64) -> C64, z: C64, h: f64) -> C64 {
    (f(z + h) - f(z - h)) / (2.0 * h)
}

/// A mixed family of test potentials; every fifth one is constant.
pub fn random_potential(rng: &mut ChaCha8Rng, index: usize) -> Potential {
    match index % 5 {
        0 => Potential::Constant {
            c: rng.gen_range(-5.0..=5.0),
        },
        1 | 2 => random_grid_potential(rng, 5.0),
        3 => Potential::Cosine {
            amplitude: rng.gen_range(-5.0..=5.0),
            frequency: rng.gen_range(1..=3) as f64,
        },
        _ => Potential::PolyInX {
            coeffs: random_coeffs(rng, 3, 3.0),
        },
    }
}
