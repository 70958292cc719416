use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{One, Zero};

use super::{Angle, GateKind, GateOp};
use crate::error::{Error, Result};
use crate::Real;

/// Sub-space indices `(from, to)` of the plane a rotation gate acts in; the
/// matrix is the identity elsewhere.
fn rotation_plane(kind: GateKind) -> Option<(usize, usize)> {
    match kind {
        GateKind::RY => Some((0, 1)),
        GateKind::CRY => Some((2, 3)),
        GateKind::G => Some((1, 2)),
        GateKind::CG => Some((5, 6)),
        GateKind::G2 => Some((3, 12)),
        GateKind::CG2 => Some((16 + 3, 16 + 12)),
        GateKind::X | GateKind::H | GateKind::CX => None,
    }
}

fn bound_angle<T: Real>(op: &GateOp) -> Result<T> {
    match op.angle() {
        Some(Angle::Bound(v)) => Ok(T::of(v)),
        Some(Angle::Param { slot, .. }) => Err(Error::UnboundParameter { slot }),
        None => Err(Error::contract(format!("{} has no angle", op.kind()))),
    }
}

fn real<T: Real>(v: T) -> Complex<T> {
    Complex::new(v, T::zero())
}

/// The exact matrix of a gate on its own qubits.
pub fn gate_unitary<T: Real>(op: &GateOp) -> Result<DMatrix<Complex<T>>> {
    let dim = 1usize << op.kind().arity();
    let mut m = DMatrix::<Complex<T>>::identity(dim, dim);
    match op.kind() {
        GateKind::X => {
            m.fill(Complex::zero());
            m[(0, 1)] = Complex::one();
            m[(1, 0)] = Complex::one();
        }
        GateKind::H => {
            let h = real(T::FRAC_1_SQRT_2());
            m.fill(h);
            m[(1, 1)] = -h;
        }
        GateKind::CX => {
            m[(2, 2)] = Complex::zero();
            m[(3, 3)] = Complex::zero();
            m[(2, 3)] = Complex::one();
            m[(3, 2)] = Complex::one();
        }
        kind => {
            let theta = bound_angle::<T>(op)?;
            let half = theta / T::of(2.0);
            let (c, s) = (real(half.cos()), real(half.sin()));
            let (i0, i1) = rotation_plane(kind).expect("rotation gate");
            m[(i0, i0)] = c;
            m[(i1, i1)] = c;
            m[(i1, i0)] = s;
            m[(i0, i1)] = -s;
        }
    }
    Ok(m)
}

/// Derivative of [`gate_unitary`] with respect to the gate's own angle.
pub fn gate_derivative<T: Real>(op: &GateOp) -> Result<DMatrix<Complex<T>>> {
    let (i0, i1) = rotation_plane(op.kind()).ok_or_else(|| Error::contract(format!("{} has no angle", op.kind())))?;
    let theta = bound_angle::<T>(op)?;
    let half = theta / T::of(2.0);
    let two = T::of(2.0);
    let (c, s) = (real(half.cos() / two), real(half.sin() / two));
    let dim = 1usize << op.kind().arity();
    let mut m = DMatrix::<Complex<T>>::zeros(dim, dim);
    m[(i0, i0)] = -s;
    m[(i1, i1)] = -s;
    m[(i1, i0)] = c;
    m[(i0, i1)] = -c;
    Ok(m)
}

/// `max |a - e^{i phi} b|` with `phi` fixed by the largest-magnitude entry of
/// `b`; returns infinity on shape mismatch.
pub fn max_phase_deviation<T: Real>(a: &DMatrix<Complex<T>>, b: &DMatrix<Complex<T>>) -> T {
    if a.shape() != b.shape() {
        return T::infinity();
    }
    let (mut k, mut best) = (0, T::zero());
    for (i, v) in b.iter().enumerate() {
        if v.norm() > best {
            best = v.norm();
            k = i;
        }
    }
    if best == T::zero() {
        return a.iter().map(|v| v.norm()).fold(T::zero(), T::max);
    }
    let ratio = a.as_slice()[k] / b.as_slice()[k];
    let phase = if ratio.norm() > T::zero() {
        ratio / ratio.norm()
    } else {
        Complex::one()
    };
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (*x - *y * phase).norm())
        .fold(T::zero(), T::max)
}
