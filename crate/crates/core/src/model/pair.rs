#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;


use crate::linalg::{pauli_product, project, Axis, CMatrix, PauliLabel, StateVector, C64};
use crate::{Error, Result};

/// Two coupled qubits
/// `H0 = E_z (sz1 + a0 sz2) + E_mx sx1 sx2 + E_my sy1 sy2 + E_mz sz1 sz2`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UqdpPairSpec {
    pub e_z: f64,
    pub e_mx: f64,
    pub e_my: f64,
    pub e_mz: f64,
    /// Splitting ratio of the second qubit to the first.
    pub a0: f64,
}

impl UqdpPairSpec {
    /// Pure `sx1 sx2` coupling of strength `e_m` between identical qubits.
    pub fn xx(e_z: f64, e_m: f64) -> Self {
        Self {
            e_z,
            e_mx: e_m,
            e_my: 0.0,
            e_mz: 0.0,
            a0: 1.0,
        }
    }

    /// Partially isotropic coupling `E_mx = e_m`, `E_my = E_mz = b0 e_m`.
    pub fn isotropic(e_z: f64, e_m: f64, b0: f64) -> Self {
        Self {
            e_my: b0 * e_m,
            e_mz: b0 * e_m,
            ..Self::xx(e_z, e_m)
        }
    }

    pub fn with_a0(mut self, a0: f64) -> Self {
        self.a0 = a0;
        self
    }

    /// The pair has a protected subspace iff `E_mx` or `E_my` is nonzero.
    pub fn is_uqdp_valid(&self) -> bool {
        self.e_mx != 0.0 || self.e_my != 0.0
    }

    /// True for pure `sx sx` coupling between identical qubits, where the
    /// second-order effective Hamiltonian applies.
    pub fn is_xx_symmetric(&self) -> bool {
        self.e_my == 0.0 && self.e_mz == 0.0 && self.a0 == 1.0
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.e_z, self.e_mx, self.e_my, self.e_mz, self.a0];
        if !all.iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite pair parameter".into()));
        }
        Ok(())
    }
}

/// The 4x4 pair Hamiltonian in the product basis `|uu>, |ud>, |du>, |dd>`.
pub fn pair_hamiltonian(spec: &UqdpPairSpec) -> CMatrix {
    let p = |labels: &[(Axis, usize)]| {
        let labels: Vec<PauliLabel> = labels.iter().map(|&(a, s)| PauliLabel::new(a, s)).collect();
        pauli_product(&labels, 2).expect("two-site pauli strings are valid")
    };
    let mut h = p(&[(Axis::Z, 0)]).scale_real(spec.e_z);
    h.add_scaled(C64::new(spec.e_z * spec.a0, 0.0), &p(&[(Axis::Z, 1)]));
    for (axis, e) in [(Axis::X, spec.e_mx), (Axis::Y, spec.e_my), (Axis::Z, spec.e_mz)] {
        if e != 0.0 {
            h.add_scaled(C64::new(e, 0.0), &p(&[(axis, 0), (axis, 1)]));
        }
    }
    h
}

/// The four eigenstates of a pair Hamiltonian, built sector by sector.
///
/// `H0` conserves the parity of the total `sigma_z`. The even sector
/// `{|uu>, |dd>}` holds `|1>` (lower) and `|2>`; the odd sector
/// `{|ud>, |du>}` holds the encoded pair `|3>` (lower) and `|4>`.
///
/// Gauge: `|1>`, `|2>`, `|3>` are real, `|3>` has a nonnegative `|du>`
/// amplitude and `|4>` is signed so that `<4|sz1|3>` is negative, which makes
/// `P sz1 P = -X` and `P sz2 P = +X` on the encoded qubit.
#[derive(Clone, Debug)]
pub struct PairEigenbasis {
    pub states: [StateVector; 4],
    pub energies: [f64; 4],
    /// Even-sector mixing angle, `tan(theta) = (E_mx - E_my) / (E_z (1 + a0))`.
    pub mixing_angle: f64,
    /// Odd-sector angle, `pi/2` for identical qubits.
    pub odd_angle: f64,
}

impl PairEigenbasis {
    pub fn new(spec: &UqdpPairSpec) -> Self {
        let even_diag = spec.e_z * (1.0 + spec.a0);
        let even_off = spec.e_mx - spec.e_my;
        let odd_diag = spec.e_z * (1.0 - spec.a0);
        let odd_off = spec.e_mx + spec.e_my;

        let theta = even_off.atan2(even_diag);
        let r_even = even_diag.hypot(even_off);
        let (s, c) = (0.5 * theta).sin_cos();
        // Lower even eigenvector of [[d, g], [g, -d]]: (-sin, cos).
        let one = StateVector::from_real(&[-s, 0.0, 0.0, c]);
        let two = StateVector::from_real(&[c, 0.0, 0.0, s]);

        // Degenerate odd sector: take the E_m -> 0+ limit.
        let beta = if odd_off == 0.0 && odd_diag == 0.0 {
            core::f64::consts::FRAC_PI_2
        } else {
            odd_off.atan2(odd_diag)
        };
        let r_odd = odd_diag.hypot(odd_off);
        let (sb, cb) = (0.5 * beta).sin_cos();
        let three = StateVector::from_real(&[0.0, -sb, cb, 0.0]);
        let mut four = StateVector::from_real(&[0.0, cb, sb, 0.0]);
        // <4|sz1|3> = -sin(beta); flip |4> when that is positive.
        if beta.sin() < 0.0 {
            four = four.scale(C64::new(-1.0, 0.0));
        }
        let states = [one, two, three, four];
        let energies = [
            spec.e_mz - r_even,
            spec.e_mz + r_even,
            -spec.e_mz - r_odd,
            -spec.e_mz + r_odd,
        ];
        Self {
            states,
            energies,
            mixing_angle: theta,
            odd_angle: beta,
        }
    }
}

/// The encoded qubit `{|3>, |4>}` of a coupled pair.
#[derive(Clone, Debug)]
pub struct EncodedSubspace {
    spec: UqdpPairSpec,
    eigenbasis: PairEigenbasis,
}

impl EncodedSubspace {
    pub fn new(spec: &UqdpPairSpec) -> Result<Self> {
        spec.validate()?;
        if !spec.is_uqdp_valid() {
            return Err(Error::NoProtectedSubspace);
        }
        Ok(Self {
            spec: *spec,
            eigenbasis: PairEigenbasis::new(spec),
        })
    }

    pub fn spec(&self) -> &UqdpPairSpec {
        &self.spec
    }

    pub fn eigenbasis(&self) -> &PairEigenbasis {
        &self.eigenbasis
    }

    pub fn state3(&self) -> &StateVector {
        &self.eigenbasis.states[2]
    }

    pub fn state4(&self) -> &StateVector {
        &self.eigenbasis.states[3]
    }

    /// `[|3>, |4>]`, the logical `|0>` and `|1>`.
    pub fn basis(&self) -> Vec<StateVector> {
        alloc::vec![self.state3().clone(), self.state4().clone()]
    }

    /// `[E_3, E_4]`.
    pub fn energies(&self) -> [f64; 2] {
        [self.eigenbasis.energies[2], self.eigenbasis.energies[3]]
    }

    /// `E_4 - E_3`; equals `2 E_m` for pure `sx sx` coupling.
    pub fn splitting(&self) -> f64 {
        self.eigenbasis.energies[3] - self.eigenbasis.energies[2]
    }

    /// Even-sector mixing angle `theta`.
    pub fn mixing_angle(&self) -> f64 {
        self.eigenbasis.mixing_angle
    }

    /// Rotation of the encoded states away from the symmetric/antisymmetric
    /// combinations, `1/2 asin((a0 - 1) E_z / E_e)` for `sx sx` coupling.
    pub fn spread_angle(&self) -> f64 {
        -0.5 * (core::f64::consts::FRAC_PI_2 - self.eigenbasis.odd_angle)
    }

    pub fn projector(&self) -> CMatrix {
        outer(self.state3(), self.state3()) + &outer(self.state4(), self.state4())
    }

    /// `|3><4| + |4><3|` on the 4-dim space.
    pub fn logical_x(&self) -> CMatrix {
        outer(self.state3(), self.state4()) + &outer(self.state4(), self.state3())
    }

    /// `-i|3><4| + i|4><3|` on the 4-dim space.
    pub fn logical_y(&self) -> CMatrix {
        let i = C64::new(0.0, 1.0);
        let mut y = outer(self.state3(), self.state4()).scale(-i);
        y.add_scaled(i, &outer(self.state4(), self.state3()));
        y
    }

    /// `|3><3| - |4><4|` on the 4-dim space.
    pub fn logical_z(&self) -> CMatrix {
        &outer(self.state3(), self.state3()) - &outer(self.state4(), self.state4())
    }

    /// The 2x2 matrix of `op` in the encoded basis.
    pub fn project(&self, op: &CMatrix) -> Result<CMatrix> {
        project(op, &self.basis())
    }

    /// `<3|sz1|3>` and `<3|sz2|3>`; the `|4>` values are their negatives.
    pub fn diagonal_residuals(&self) -> [f64; 2] {
        let cos_beta = self.eigenbasis.odd_angle.cos();
        [-cos_beta, cos_beta]
    }

    /// Population outside the encoded subspace.
    pub fn leakage(&self, psi: &StateVector) -> f64 {
        let inside = self.state3().overlap(psi) + self.state4().overlap(psi);
        (psi.inner(psi).re - inside).max(0.0)
    }
}

pub(crate) fn outer(a: &StateVector, b: &StateVector) -> CMatrix {
    let (x, y) = (a.amplitudes(), b.amplitudes());
    CMatrix::from_fn(x.len(), y.len(), |i, j| x[i] * y[j].conj())
}

/// `-E_m + E_m (vx1^2 + vx2^2) / (2 E_z^2) - (vz1 - vz2)^2 / (2 E_m)`, the
/// coefficient of `Z` in the second-order encoded Hamiltonian.
pub fn effective_coefficient(e_z: f64, e_m: f64, vx: [f64; 2], vz: [f64; 2]) -> f64 {
    let dz = vz[0] - vz[1];
    -e_m + e_m * (vx[0] * vx[0] + vx[1] * vx[1]) / (2.0 * e_z * e_z) - dz * dz / (2.0 * e_m)
}

/// The second-order encoded Hamiltonian `c Z` for instantaneous noise values.
///
/// Only defined for pure `sx sx` coupling between identical qubits with
/// `E_m != 0`.
pub fn effective_encoded_hamiltonian(spec: &UqdpPairSpec, vx: [f64; 2], vz: [f64; 2]) -> Result<CMatrix> {
    if !spec.is_xx_symmetric() {
        return Err(Error::Unsupported(
            "effective encoded Hamiltonian needs sx sx coupling and a0 = 1",
        ));
    }
    if spec.e_mx == 0.0 {
        return Err(Error::SingularCoupling("effective encoded Hamiltonian at E_m = 0"));
    }
    let c = effective_coefficient(spec.e_z, spec.e_mx, vx, vz);
    Ok(CMatrix::diagonal(&[c, -c]))
}
