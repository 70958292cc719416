//! Reference implementations used as test oracles. Everything here is
//! built from textbook definitions (Kronecker products, explicit gate
//! matrices, brute-force embedding) and shares no code with the library.
#![allow(dead_code)]

use mrem::{GateKind, GateOp, PauliSum64};
use nalgebra::DMatrix;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type C = Complex<f64>;
pub type Mat = DMatrix<C>;

pub fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixtures_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn single_pauli(ch: char) -> Mat {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match ch {
        'I' => Mat::from_row_slice(2, 2, &[o, z, z, o]),
        'X' => Mat::from_row_slice(2, 2, &[z, o, o, z]),
        'Y' => Mat::from_row_slice(2, 2, &[z, -i, i, z]),
        'Z' => Mat::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => panic!("not a Pauli letter: {ch}"),
    }
}

/// Kronecker product of the label's letters, leftmost letter most
/// significant, so the rightmost letter acts on qubit 0.
pub fn pauli_matrix(label: &str) -> Mat {
    label
        .chars()
        .fold(Mat::identity(1, 1), |acc, ch| acc.kronecker(&single_pauli(ch)))
}

pub fn sum_matrix(h: &PauliSum64) -> Mat {
    let d = 1usize << h.n_qubits();
    let mut m = Mat::zeros(d, d);
    for t in h.terms() {
        m += pauli_matrix(&t.label()) * t.coeff();
    }
    m
}

fn real(rows: usize, data: &[f64]) -> Mat {
    Mat::from_row_slice(rows, rows, &data.iter().map(|v| c(*v, 0.0)).collect::<Vec<_>>())
}

fn plane_rotation(dim: usize, i0: usize, i1: usize, theta: f64) -> Mat {
    let (s, co) = (theta / 2.0).sin_cos();
    let mut m = Mat::identity(dim, dim);
    m[(i0, i0)] = c(co, 0.0);
    m[(i1, i1)] = c(co, 0.0);
    m[(i1, i0)] = c(s, 0.0);
    m[(i0, i1)] = c(-s, 0.0);
    m
}

fn controlled(u: &Mat) -> Mat {
    let k = u.nrows();
    let mut m = Mat::identity(2 * k, 2 * k);
    m.view_mut((k, k), (k, k)).copy_from(u);
    m
}

/// Gate matrix on its own qubits, first listed qubit most significant.
pub fn gate_matrix(kind: GateKind, theta: f64) -> Mat {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match kind {
        GateKind::X => real(2, &[0.0, 1.0, 1.0, 0.0]),
        GateKind::H => real(2, &[h, h, h, -h]),
        GateKind::RY => plane_rotation(2, 0, 1, theta),
        GateKind::CX => controlled(&real(2, &[0.0, 1.0, 1.0, 0.0])),
        GateKind::CRY => controlled(&plane_rotation(2, 0, 1, theta)),
        // |01> -> cos|01> + sin|10>
        GateKind::G => plane_rotation(4, 1, 2, theta),
        GateKind::CG => controlled(&plane_rotation(4, 1, 2, theta)),
        // |0011> -> cos|0011> + sin|1100>
        GateKind::G2 => plane_rotation(16, 3, 12, theta),
        GateKind::CG2 => controlled(&plane_rotation(16, 3, 12, theta)),
    }
}

/// Brute-force embedding of a `k`-qubit matrix acting on `qubits` into an
/// `n`-qubit register.
pub fn embed(u: &Mat, qubits: &[usize], n: usize) -> Mat {
    let d = 1usize << n;
    let k = qubits.len();
    let sub = |i: usize| {
        qubits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (t, &q)| acc | ((i >> q) & 1) << (k - 1 - t))
    };
    let mask: usize = qubits.iter().map(|q| 1usize << q).sum();
    let mut m = Mat::zeros(d, d);
    for r in 0..d {
        for col in 0..d {
            if r & !mask == col & !mask {
                m[(r, col)] = u[(sub(r), sub(col))];
            }
        }
    }
    m
}

/// Concrete angle of a bound op.
pub fn op_angle(op: &GateOp) -> f64 {
    op.angle().map(|a| a.value().expect("bound angle")).unwrap_or(0.0)
}

pub fn op_matrix(op: &GateOp, n: usize) -> Mat {
    embed(&gate_matrix(op.kind(), op_angle(op)), op.qubits(), n)
}

/// Product of the circuit's gates, last gate leftmost.
pub fn chain_unitary(ops: &[GateOp], n: usize) -> Mat {
    ops.iter()
        .fold(Mat::identity(1 << n, 1 << n), |acc, op| op_matrix(op, n) * acc)
}

pub fn basis_vector(n: usize, b: usize) -> nalgebra::DVector<C> {
    let mut v = nalgebra::DVector::zeros(1 << n);
    v[b] = c(1.0, 0.0);
    v
}

/// `max |a - e^{i phi} b|` with the phase taken from the largest entry of `b`.
pub fn phase_distance(a: &Mat, b: &Mat) -> f64 {
    let (idx, _) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .expect("non-empty");
    let phase = a[idx] / b[idx];
    let phase = phase / phase.norm();
    (a - b * phase).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Sorted eigenvalues of a Hermitian matrix via the real 2d x 2d embedding.
pub fn hermitian_spectrum(m: &Mat) -> Vec<f64> {
    let d = m.nrows();
    let mut big = DMatrix::<f64>::zeros(2 * d, 2 * d);
    for r in 0..d {
        for col in 0..d {
            let v = m[(r, col)];
            big[(r, col)] = v.re;
            big[(r + d, col + d)] = v.re;
            big[(r, col + d)] = -v.im;
            big[(r + d, col)] = v.im;
        }
    }
    let mut ev: Vec<f64> = big.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    // every eigenvalue appears twice in the embedding
    ev.into_iter().step_by(2).collect()
}

pub fn random_label(rng: &mut impl Rng, n: usize) -> String {
    (0..n).map(|_| ['I', 'X', 'Y', 'Z'][rng.random_range(0..4)]).collect()
}

/// Random Hermitian Pauli sum with real coefficients.
pub fn random_hamiltonian(rng: &mut impl Rng, n: usize, terms: usize) -> PauliSum64 {
    let pairs: Vec<(f64, String)> = (0..terms)
        .map(|_| (rng.random_range(-1.0..1.0), random_label(rng, n)))
        .collect();
    let refs: Vec<(f64, &str)> = pairs.iter().map(|(v, l)| (*v, l.as_str())).collect();
    PauliSum64::from_labels(&refs).expect("valid labels")
}

pub fn random_op(rng: &mut impl Rng, n: usize) -> GateOp {
    use mrem::Angle;
    let kinds: Vec<GateKind> = GateKind::ALL.into_iter().filter(|k| k.arity() <= n).collect();
    let kind = kinds[rng.random_range(0..kinds.len())];
    let mut pool: Vec<usize> = (0..n).collect();
    let mut qubits = Vec::new();
    for _ in 0..kind.arity() {
        qubits.push(pool.swap_remove(rng.random_range(0..pool.len())));
    }
    let angle = kind.takes_angle().then(|| Angle::Bound(rng.random_range(-6.3..6.3)));
    GateOp::new(kind, qubits, angle).expect("valid random op")
}

pub fn random_state(rng: &mut impl Rng, n: usize) -> Vec<C> {
    let mut v: Vec<C> = (0..1 << n)
        .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
    v
}

/// Dense `<psi|M|psi>`.
pub fn quadratic_form(m: &Mat, psi: &[C]) -> C {
    let v = nalgebra::DVector::from_column_slice(psi);
    (v.adjoint() * m * &v)[(0, 0)]
}
