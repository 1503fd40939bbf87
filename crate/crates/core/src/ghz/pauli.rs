//! Three-qubit Pauli strings and the commuting stabilizer set whose joint
//! eigenbasis is the GHZ basis.

use std::fmt;

use num_traits::{One, Zero};

use super::GhzIndex;
use crate::exact::{GaussianRational, Matrix, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// Power of `i`: 0 → 1, 1 → i, 2 → −1, 3 → −i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);

    pub fn mul(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }

    pub fn conj(self) -> Phase {
        Phase((4 - self.0) % 4)
    }

    pub fn to_gaussian(self) -> GaussianRational {
        match self.0 {
            0 => GaussianRational::one(),
            1 => GaussianRational::i(),
            2 => -GaussianRational::one(),
            _ => -GaussianRational::i(),
        }
    }

    /// `±1` when the phase is real.
    pub fn as_sign(self) -> Option<i8> {
        match self.0 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    /// Applies this phase to an exact value.
    pub fn apply(self, z: &GaussianRational) -> GaussianRational {
        match self.0 {
            0 => z.clone(),
            1 => GaussianRational::new(-&z.im, z.re.clone()),
            2 => -z,
            _ => GaussianRational::new(z.im.clone(), -&z.re),
        }
    }
}

impl Pauli {
    /// `P|bit> = phase |out>`.
    pub fn act(self, bit: usize) -> (usize, Phase) {
        match (self, bit) {
            (Pauli::I, b) => (b, Phase(0)),
            (Pauli::X, b) => (1 - b, Phase(0)),
            (Pauli::Y, 0) => (1, Phase(1)),
            (Pauli::Y, _) => (0, Phase(3)),
            (Pauli::Z, 0) => (0, Phase(0)),
            (Pauli::Z, _) => (1, Phase(2)),
        }
    }

    pub fn matrix(self) -> Matrix {
        let mut m = Matrix::zeros(2, 2);
        for col in 0..2 {
            let (row, ph) = self.act(col);
            m[(row, col)] = ph.to_gaussian();
        }
        m
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A tensor product of three single-qubit Paulis acting on `A`, `B`, `C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString(pub [Pauli; 3]);

use Pauli::{I, X, Y, Z};

/// `{III, XXX, IZZ, ZIZ, ZZI, XYY, YXY, YYX}`.
pub const STABILIZER_SET: [PauliString; 8] = [
    PauliString([I, I, I]),
    PauliString([X, X, X]),
    PauliString([I, Z, Z]),
    PauliString([Z, I, Z]),
    PauliString([Z, Z, I]),
    PauliString([X, Y, Y]),
    PauliString([Y, X, Y]),
    PauliString([Y, Y, X]),
];

impl PauliString {
    /// Monomial action on a three-bit basis string (A most significant).
    pub fn act(&self, x: usize) -> (usize, Phase) {
        let mut out = 0;
        let mut phase = Phase::ONE;
        for (q, p) in self.0.iter().enumerate() {
            let shift = 2 - q;
            let (b, ph) = p.act((x >> shift) & 1);
            out |= b << shift;
            phase = phase.mul(ph);
        }
        (out, phase)
    }

    /// The 8×8 unitary `P_A ⊗ P_B ⊗ P_C`.
    pub fn matrix(&self) -> Matrix {
        self.0[0].matrix().kron(&self.0[1].matrix()).kron(&self.0[2].matrix())
    }

    /// The eigenvalue `±1` with `U|ψ_i> = ±|ψ_i>`, or `None` if `ψ_i` is
    /// not an eigenvector.
    pub fn eigen_sign(&self, i: GhzIndex) -> Option<i8> {
        let mut image = [GaussianRational::zero(), GaussianRational::zero()];
        let amps = i.amplitudes();
        let mut out = vec![GaussianRational::zero(); 8];
        for (x, a) in amps {
            let (y, ph) = self.act(x);
            out[y] += &ph.apply(&GaussianRational::real(Rational::from_integer(a as i64)));
        }
        for (k, (x, _)) in amps.iter().enumerate() {
            image[k] = out[*x].clone();
        }
        let support_only = out
            .iter()
            .enumerate()
            .all(|(x, z)| z.is_zero() || amps.iter().any(|(y, _)| *y == x));
        if !support_only {
            return None;
        }
        let first = GaussianRational::real(Rational::from_integer(amps[0].1 as i64));
        let second = GaussianRational::real(Rational::from_integer(amps[1].1 as i64));
        for sign in [1i8, -1] {
            let s = Rational::from_integer(sign as i64);
            if image[0] == first.scale(&s) && image[1] == second.scale(&s) {
                return Some(sign);
            }
        }
        None
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.0 {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}
