//! Z2 symmetry detection and qubit tapering.
//!
//! Symmetries are found as the GF(2) kernel of the Hamiltonian's check
//! matrix under the symplectic form. A commuting subset is extracted, and
//! each generator `tau_i` gets a single-qubit partner `sigma_i` on its own
//! qubit that anticommutes with `tau_i` and commutes with every other
//! generator. The Clifford `U = prod_i (sigma_i + tau_i) / sqrt 2` maps each
//! `tau_i` onto `sigma_i`; after conjugation the tapered qubits carry only
//! `I` or `sigma_i`, which is replaced by the sector eigenvalue.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::pauli::{PauliSum, PauliTerm};
use crate::sim::{apply_pauli_sum, QuantumState};
use crate::{Basis, Real, SYMMETRY_QUBIT_LIMIT};

/// Symplectic vector packed as `x | z << n`.
type Sym = u64;

fn pack<T: Real>(t: &PauliTerm<T>) -> Sym {
    t.x_mask() | t.z_mask() << t.n_qubits()
}

fn unpack<T: Real>(v: Sym, n: usize) -> PauliTerm<T> {
    let low = (1u64 << n) - 1;
    PauliTerm::new(n, v & low, v >> n & low, Complex::one()).expect("packed masks fit")
}

fn omega(a: Sym, b: Sym, n: usize) -> bool {
    let low = (1u64 << n) - 1;
    let (ax, az, bx, bz) = (a & low, a >> n, b & low, b >> n);
    ((ax & bz).count_ones() + (az & bx).count_ones()) % 2 == 1
}

/// Row-reduces `rows` over `n_cols` columns, lowest-index pivots first.
/// Returns the reduced rows paired with their pivot columns.
fn rref(mut rows: Vec<u64>, n_cols: usize) -> Vec<(u64, usize)> {
    let mut out: Vec<(u64, usize)> = Vec::new();
    for col in 0..n_cols {
        let bit = 1u64 << col;
        let Some(pos) = rows.iter().position(|r| r & bit != 0) else {
            continue;
        };
        let pivot = rows.swap_remove(pos);
        for r in rows.iter_mut() {
            if *r & bit != 0 {
                *r ^= pivot;
            }
        }
        for (r, _) in out.iter_mut() {
            if *r & bit != 0 {
                *r ^= pivot;
            }
        }
        out.push((pivot, col));
    }
    out
}

fn rank(rows: &[u64], n_cols: usize) -> usize {
    rref(rows.to_vec(), n_cols).len()
}

/// GF(2) basis of the Pauli strings commuting with every term of `h`,
/// identity excluded. Empty when `h` has no symmetry.
pub fn find_symmetries<T: Real>(h: &PauliSum<T>) -> Result<Vec<PauliTerm<T>>> {
    let n = h.n_qubits();
    if n > SYMMETRY_QUBIT_LIMIT {
        return Err(Error::Capacity {
            what: "symmetry search",
            requested: n,
            limit: SYMMETRY_QUBIT_LIMIT,
        });
    }
    // Row of term t in the variables (x_0..x_{n-1}, z_0..z_{n-1}): the pairing
    // v . row equals the symplectic form of v with t.
    let rows: Vec<u64> = h.terms().iter().map(|t| t.z_mask() | t.x_mask() << n).collect();
    let reduced = rref(rows, 2 * n);
    let pivots: Vec<usize> = reduced.iter().map(|(_, c)| *c).collect();
    let mut basis = Vec::new();
    for free in (0..2 * n).filter(|c| !pivots.contains(c)) {
        let mut v: Sym = 1 << free;
        for (row, pc) in &reduced {
            if row >> free & 1 == 1 {
                v |= 1 << pc;
            }
        }
        basis.push(unpack(v, n));
    }
    Ok(basis)
}

/// Largest mutually commuting subset obtainable from `gens` by symplectic
/// Gram-Schmidt: of every anticommuting pair only the first member is kept.
fn isotropic_subset(gens: &[Sym], n: usize) -> Vec<Sym> {
    let mut rest: Vec<Sym> = gens.to_vec();
    let mut out = Vec::new();
    while !rest.is_empty() {
        let a = rest.remove(0);
        match rest.iter().position(|&b| omega(a, b, n)) {
            None => out.push(a),
            Some(pos) => {
                let b = rest.remove(pos);
                for c in rest.iter_mut() {
                    let mut v = *c;
                    if omega(*c, b, n) {
                        v ^= a;
                    }
                    if omega(*c, a, n) {
                        v ^= b;
                    }
                    *c = v;
                }
                rest.retain(|&c| c != 0);
                out.push(a);
            }
        }
    }
    out
}

/// Chooses one partner `(qubit, op)` per generator (op in X, Z, Y), with
/// linearly independent anticommutation patterns, preferring low qubits
/// and X. Depth-first search; the first branch is the greedy choice.
fn assign_partners(gens: &[Sym], n: usize) -> Option<Vec<(usize, Sym)>> {
    fn single(q: usize, op: u8, n: usize) -> Sym {
        let (x, z) = match op {
            0 => (1u64, 0u64),
            1 => (0, 1),
            _ => (1, 1),
        };
        (x << q) | (z << q) << n
    }
    fn pattern(s: Sym, gens: &[Sym], n: usize) -> u64 {
        gens.iter()
            .enumerate()
            .map(|(j, &g)| (omega(s, g, n) as u64) << j)
            .sum()
    }
    fn search(q: usize, gens: &[Sym], n: usize, chosen: &mut Vec<(usize, Sym, u64)>) -> bool {
        let k = gens.len();
        if chosen.len() == k {
            return true;
        }
        if n - q < k - chosen.len() {
            return false;
        }
        for op in 0..3u8 {
            let s = single(q, op, n);
            let pat = pattern(s, gens, n);
            let mut rows: Vec<u64> = chosen.iter().map(|c| c.2).collect();
            rows.push(pat);
            if pat != 0 && rank(&rows, k) == rows.len() {
                chosen.push((q, s, pat));
                if search(q + 1, gens, n, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        search(q + 1, gens, n, chosen)
    }
    let mut chosen = Vec::new();
    search(0, gens, n, &mut chosen).then(|| chosen.into_iter().map(|(q, s, _)| (q, s)).collect())
}

/// Inverse of a `k x k` GF(2) matrix given as row bitmasks.
fn gf2_inverse(rows: &[u64]) -> Option<Vec<u64>> {
    let k = rows.len();
    let mut aug: Vec<u64> = rows.iter().enumerate().map(|(i, r)| r | 1 << (k + i)).collect();
    for col in 0..k {
        let pos = (col..k).find(|&r| aug[r] >> col & 1 == 1)?;
        aug.swap(col, pos);
        for r in 0..k {
            if r != col && aug[r] >> col & 1 == 1 {
                aug[r] ^= aug[col];
            }
        }
    }
    Some(aug.iter().map(|r| r >> k).collect())
}

/// Commuting Z2 symmetry generators with their tapering partners and the
/// chosen sector.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetrySet<T> {
    n_qubits: usize,
    generators: Vec<PauliTerm<T>>,
    partners: Vec<PauliTerm<T>>,
    tapered_qubits: Vec<usize>,
    sector: Vec<i8>,
}

impl<T: Real> SymmetrySet<T> {
    /// Symmetries of `h` in the all-`+1` sector.
    pub fn for_hamiltonian(h: &PauliSum<T>) -> Result<Self> {
        Self::from_generators(h.n_qubits(), &find_symmetries(h)?)
    }

    /// Builds the tapering data from commuting candidates. Anticommuting
    /// candidates are reduced to a commuting subset, and the generator basis
    /// is changed so that each has a private partner qubit.
    pub fn from_generators(n_qubits: usize, candidates: &[PauliTerm<T>]) -> Result<Self> {
        if n_qubits > SYMMETRY_QUBIT_LIMIT {
            return Err(Error::Capacity {
                what: "symmetry set",
                requested: n_qubits,
                limit: SYMMETRY_QUBIT_LIMIT,
            });
        }
        if let Some(bad) = candidates.iter().find(|t| t.n_qubits() != n_qubits) {
            return Err(Error::dim(format!(
                "{}-qubit generator for a {n_qubits}-qubit register",
                bad.n_qubits()
            )));
        }
        let packed: Vec<Sym> = candidates.iter().map(pack).filter(|&v| v != 0).collect();
        if rank(&packed, 2 * n_qubits) != packed.len() {
            return Err(Error::contract("symmetry generators are not GF(2)-independent"));
        }
        let gens = isotropic_subset(&packed, n_qubits);
        let partners = assign_partners(&gens, n_qubits)
            .ok_or_else(|| Error::Consistency("no tapering qubit assignment exists".into()))?;
        // m[j] bit i: partner i anticommutes with generator j.
        let k = gens.len();
        let m: Vec<u64> = gens
            .iter()
            .map(|&g| {
                partners
                    .iter()
                    .enumerate()
                    .map(|(i, (_, s))| (omega(*s, g, n_qubits) as u64) << i)
                    .sum()
            })
            .collect();
        // New generators tau'_a = prod_j tau_j^{B[a][j]} with B M = I.
        let b = gf2_inverse(&m).ok_or_else(|| Error::Consistency("partner patterns are singular".into()))?;
        let generators: Vec<PauliTerm<T>> = b
            .iter()
            .map(|row| {
                let v = (0..k).filter(|j| row >> j & 1 == 1).fold(0, |acc, j| acc ^ gens[j]);
                unpack(v, n_qubits)
            })
            .collect();
        let set = Self {
            n_qubits,
            tapered_qubits: partners.iter().map(|(q, _)| *q).collect(),
            partners: partners.iter().map(|(_, s)| unpack(*s, n_qubits)).collect(),
            generators,
            sector: vec![1; k],
        };
        set.check_structure()?;
        Ok(set)
    }

    fn check_structure(&self) -> Result<()> {
        for (i, (g, s)) in self.generators.iter().zip(&self.partners).enumerate() {
            for (j, g2) in self.generators.iter().enumerate() {
                if !g.commutes_with(g2) {
                    return Err(Error::Consistency("generators do not commute".into()));
                }
                if s.commutes_with(g2) == (i == j) {
                    return Err(Error::Consistency(format!(
                        "partner {i} has the wrong commutation with generator {j}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn with_sector(mut self, sector: Vec<i8>) -> Result<Self> {
        if sector.len() != self.generators.len() || sector.iter().any(|s| s.abs() != 1) {
            return Err(Error::Sector(format!(
                "sector {sector:?} for {} generators",
                self.generators.len()
            )));
        }
        self.sector = sector;
        Ok(self)
    }

    /// Selects the sector containing the basis state `det`.
    pub fn with_sector_of(self, det: Basis) -> Result<Self> {
        let sector = sector_of_determinant(det, &self.generators)?;
        self.with_sector(sector)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn reduced_qubits(&self) -> usize {
        self.n_qubits - self.generators.len()
    }

    pub fn generators(&self) -> &[PauliTerm<T>] {
        &self.generators
    }

    /// Single-qubit partners `sigma_i`, one per generator.
    pub fn partners(&self) -> &[PauliTerm<T>] {
        &self.partners
    }

    pub fn tapered_qubits(&self) -> &[usize] {
        &self.tapered_qubits
    }

    pub fn sector(&self) -> &[i8] {
        &self.sector
    }

    /// All `2^k` sectors in binary order (+1 for a clear bit).
    pub fn all_sectors(&self) -> Vec<Vec<i8>> {
        let k = self.generators.len();
        (0..1u32 << k)
            .map(|m| (0..k).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect())
            .collect()
    }

    /// Basis state of the full register to the reduced one by dropping the
    /// tapered bits.
    pub fn drop_tapered_bits(&self, det: Basis) -> Basis {
        let mut out = 0;
        let mut pos = 0;
        for q in 0..self.n_qubits {
            if self.tapered_qubits.contains(&q) {
                continue;
            }
            out |= (det >> q & 1) << pos;
            pos += 1;
        }
        out
    }

    fn insert_tapered_bits(&self, reduced: Basis) -> Basis {
        let mut out = 0;
        let mut pos = 0;
        for q in 0..self.n_qubits {
            if self.tapered_qubits.contains(&q) {
                continue;
            }
            out |= (reduced >> pos & 1) << q;
            pos += 1;
        }
        out
    }

    /// `(sigma_i + tau_i) / sqrt 2` as a Pauli sum.
    fn clifford_factor(&self, i: usize) -> PauliSum<T> {
        let r = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
        PauliSum::from_terms(
            self.n_qubits,
            [self.partners[i].with_coeff(r), self.generators[i].with_coeff(r)],
        )
        .expect("matching widths")
    }

    /// Eigenvector of `sigma_i` with eigenvalue `s` as `(amp0, amp1)`.
    fn partner_eigenvector(&self, i: usize) -> [Complex<T>; 2] {
        let r = T::FRAC_1_SQRT_2();
        let s = T::of(self.sector[i] as f64);
        let p = &self.partners[i];
        let (x, z) = (p.x_mask() != 0, p.z_mask() != 0);
        match (x, z) {
            (true, false) => [Complex::new(r, T::zero()), Complex::new(s * r, T::zero())],
            (true, true) => [Complex::new(r, T::zero()), Complex::new(T::zero(), s * r)],
            _ => {
                if s > T::zero() {
                    [Complex::one(), Complex::zero()]
                } else {
                    [Complex::zero(), Complex::one()]
                }
            }
        }
    }
}

/// Eigenvalue of each generator on `|det>`.
pub fn sector_of_determinant<T: Real>(det: Basis, generators: &[PauliTerm<T>]) -> Result<Vec<i8>> {
    generators
        .iter()
        .map(|g| {
            if g.x_mask() != 0 {
                return Err(Error::SectorUndefined(format!(
                    "basis state {det:b} is not an eigenstate of {}",
                    g.label()
                )));
            }
            let (_, phase) = g.apply_to_basis(det);
            Ok(if phase.re * g.coeff().re > T::zero() { 1 } else { -1 })
        })
        .collect()
}

/// `U P U^dagger` for `U = (sigma + tau) / sqrt 2`.
fn conjugate_term<T: Real>(p: &PauliTerm<T>, sigma: &PauliTerm<T>, tau: &PauliTerm<T>) -> Result<PauliTerm<T>> {
    let minus = |t: PauliTerm<T>| t.with_coeff(-t.coeff());
    match (p.commutes_with(sigma), p.commutes_with(tau)) {
        (true, true) => Ok(*p),
        (false, false) => Ok(minus(*p)),
        (true, false) => p.multiply(sigma)?.multiply(tau),
        (false, true) => Ok(minus(p.multiply(sigma)?.multiply(tau)?)),
    }
}

/// The reduced-register operator in the set's sector.
pub fn taper_operator<T: Real>(h: &PauliSum<T>, sym: &SymmetrySet<T>) -> Result<PauliSum<T>> {
    if h.n_qubits() != sym.n_qubits {
        return Err(Error::dim(format!(
            "{}-qubit operator with a {}-qubit symmetry set",
            h.n_qubits(),
            sym.n_qubits
        )));
    }
    let reduced_n = sym.reduced_qubits();
    let mut out = Vec::with_capacity(h.len());
    for t in h.terms() {
        if let Some(g) = sym.generators.iter().find(|g| !g.commutes_with(t)) {
            return Err(Error::Consistency(format!(
                "{} does not commute with term {}",
                g.label(),
                t.label()
            )));
        }
        let mut p = *t;
        for (sigma, tau) in sym.partners.iter().zip(&sym.generators) {
            p = conjugate_term(&p, sigma, tau)?;
        }
        let mut coeff = p.coeff();
        let (mut x, mut z) = (p.x_mask(), p.z_mask());
        for ((sigma, &q), &s) in sym.partners.iter().zip(&sym.tapered_qubits).zip(&sym.sector) {
            let bit: Basis = 1 << q;
            let on_q = (x & bit, z & bit);
            if on_q == (0, 0) {
                continue;
            }
            if on_q != (sigma.x_mask(), sigma.z_mask()) {
                return Err(Error::Consistency(format!(
                    "conjugated term carries a foreign Pauli on tapered qubit {q}"
                )));
            }
            x &= !bit;
            z &= !bit;
            coeff *= T::of(s as f64);
        }
        let term = PauliTerm::new(reduced_n, sym.drop_tapered_bits(x), sym.drop_tapered_bits(z), coeff)?;
        out.push(term);
    }
    PauliSum::from_terms(reduced_n, out)
}

/// Applies `U` to a sparse state, factor 1 first.
fn apply_clifford_sparse<T: Real>(sym: &SymmetrySet<T>, det: Basis) -> BTreeMap<Basis, Complex<T>> {
    let mut state = BTreeMap::from([(det, Complex::<T>::one())]);
    for i in 0..sym.generators.len() {
        let factor = sym.clifford_factor(i);
        let mut next: BTreeMap<Basis, Complex<T>> = BTreeMap::new();
        for (b, a) in &state {
            for t in factor.terms() {
                let (b2, ph) = t.apply_to_basis(*b);
                *next.entry(b2).or_insert_with(Complex::zero) += ph * *a;
            }
        }
        let tiny = T::epsilon() * T::of(64.0);
        next.retain(|_, a| a.norm() > tiny);
        state = next;
    }
    state
}

/// Reduced-register basis state carrying `|det>` after tapering, with the
/// phase of its amplitude.
pub fn project_determinant_with_phase<T: Real>(det: Basis, sym: &SymmetrySet<T>) -> Result<(Basis, Complex<T>)> {
    let sector = sector_of_determinant(det, &sym.generators)?;
    if sector != sym.sector {
        return Err(Error::Sector(format!(
            "basis state {det:b} lies in sector {sector:?}, set is in {:?}",
            sym.sector
        )));
    }
    let full = apply_clifford_sparse(sym, det);
    let mut reduced: BTreeMap<Basis, Complex<T>> = BTreeMap::new();
    for (b, a) in full {
        let mut amp = a;
        for (i, &q) in sym.tapered_qubits.iter().enumerate() {
            let e = sym.partner_eigenvector(i);
            amp *= e[(b >> q & 1) as usize].conj();
        }
        *reduced.entry(sym.drop_tapered_bits(b)).or_insert_with(Complex::zero) += amp;
    }
    let tol = T::of(1e-10).max(T::epsilon() * T::of(1000.0));
    let support: Vec<_> = reduced.into_iter().filter(|(_, a)| a.norm() > tol).collect();
    match support.as_slice() {
        [(b, a)] if (a.norm() - T::one()).abs() < tol => Ok((*b, *a)),
        _ => Err(Error::Consistency(format!(
            "tapered image of {det:b} is not a single basis state"
        ))),
    }
}

/// Reduced-register basis state carrying `|det>` after tapering.
pub fn project_determinant<T: Real>(det: Basis, sym: &SymmetrySet<T>) -> Result<Basis> {
    project_determinant_with_phase(det, sym).map(|(b, _)| b)
}

/// Full-register state `U^dagger (|e_s> (x) |reduced>)`, the inverse of
/// tapering a state in the set's sector.
pub fn lift_state<T: Real>(reduced: &QuantumState<T>, sym: &SymmetrySet<T>) -> Result<QuantumState<T>> {
    if reduced.n_qubits() != sym.reduced_qubits() {
        return Err(Error::dim("reduced state width does not match the symmetry set"));
    }
    let amps = reduced
        .amplitudes()
        .ok_or_else(|| Error::contract("lift_state needs a pure state"))?;
    let n = sym.n_qubits;
    let mut full = vec![Complex::<T>::zero(); 1 << n];
    for (rb, a) in amps.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let base = sym.insert_tapered_bits(rb as Basis);
        for pattern in 0..1u64 << sym.tapered_qubits.len() {
            let mut amp = *a;
            let mut b = base;
            for (i, &q) in sym.tapered_qubits.iter().enumerate() {
                let bit = pattern >> i & 1;
                amp *= sym.partner_eigenvector(i)[bit as usize];
                b |= bit << q;
            }
            full[b as usize] += amp;
        }
    }
    for i in (0..sym.generators.len()).rev() {
        full = apply_pauli_sum(&sym.clifford_factor(i), &full)?;
    }
    QuantumState::from_amplitudes(n, full)
}
