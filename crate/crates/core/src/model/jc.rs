//! Resonator coupled to one qubit:
//! `H = w0 a^dag a + E_z sz + J (a^dag s- + s+ a)`.
//!
//! Basis index `2n + s` with `n` the photon number and `s = 0` for `|up>`,
//! `s = 1` for `|down>`.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;


use crate::linalg::{CMatrix, StateVector, C64};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct JaynesCummingsSpec {
    pub omega0: f64,
    pub e_z: f64,
    pub j: f64,
    /// Highest photon number kept.
    pub n_max: usize,
}

impl JaynesCummingsSpec {
    /// Resonant spec, `w0 = 2 E_z`.
    pub fn resonant(e_z: f64, j: f64, n_max: usize) -> Self {
        Self {
            omega0: 2.0 * e_z,
            e_z,
            j,
            n_max,
        }
    }

    pub fn dim(&self) -> usize {
        2 * (self.n_max + 1)
    }

    pub fn index(n: usize, down: bool) -> usize {
        2 * n + usize::from(down)
    }

    fn check(&self) -> Result<()> {
        if self.n_max < 4 {
            return Err(Error::InvalidParameter(alloc::format!(
                "Fock cutoff {} is below 4",
                self.n_max
            )));
        }
        if ![self.omega0, self.e_z, self.j].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite resonator parameter".into()));
        }
        Ok(())
    }

    pub fn is_resonant(&self) -> bool {
        (self.omega0 - 2.0 * self.e_z).abs() <= 1e-12 * self.omega0.abs().max(self.e_z.abs())
    }
}

/// Operators of the truncated qubit-resonator space.
#[derive(Clone, Debug)]
pub struct JcOperators {
    pub a: CMatrix,
    pub a_dag: CMatrix,
    pub sigma_z: CMatrix,
    pub sigma_x: CMatrix,
    /// `|up><down|` on the qubit.
    pub sigma_plus: CMatrix,
    pub sigma_minus: CMatrix,
}

impl JcOperators {
    pub fn new(spec: &JaynesCummingsSpec) -> Self {
        let d = spec.dim();
        let idx = JaynesCummingsSpec::index;
        let mut a = CMatrix::zeros(d, d);
        let mut sz = CMatrix::zeros(d, d);
        let mut sp = CMatrix::zeros(d, d);
        for n in 0..=spec.n_max {
            for down in [false, true] {
                sz[(idx(n, down), idx(n, down))] = C64::new(if down { -1.0 } else { 1.0 }, 0.0);
                if n > 0 {
                    a[(idx(n - 1, down), idx(n, down))] = C64::new((n as f64).sqrt(), 0.0);
                }
            }
            sp[(idx(n, false), idx(n, true))] = C64::new(1.0, 0.0);
        }
        let sm = sp.dagger();
        Self {
            a_dag: a.dagger(),
            a,
            sigma_z: sz,
            sigma_x: &sp + &sm,
            sigma_plus: sp,
            sigma_minus: sm,
        }
    }
}

pub fn jc_hamiltonian(spec: &JaynesCummingsSpec) -> Result<CMatrix> {
    spec.check()?;
    let ops = JcOperators::new(spec);
    let num = &ops.a_dag * &ops.a;
    let mut h = num.scale_real(spec.omega0);
    h.add_scaled(C64::new(spec.e_z, 0.0), &ops.sigma_z);
    let exchange = &(&ops.a_dag * &ops.sigma_minus) + &(&ops.sigma_plus * &ops.a);
    h.add_scaled(C64::new(spec.j, 0.0), &exchange);
    Ok(h)
}

/// Polariton doublet `|n a> = (|n down> + (-1)^a |n-1 up>) / sqrt 2`.
#[derive(Clone, Debug)]
pub struct Doublet {
    pub n: usize,
    /// `[|n 0>, |n 1>]`.
    pub states: [StateVector; 2],
    /// Exact energies `[n w0 - E_z + J sqrt n, n w0 - E_z - J sqrt n]`.
    pub energies: [f64; 2],
}

impl Doublet {
    /// Intra-doublet splitting `E_{n0} - E_{n1} = 2 J sqrt n`.
    pub fn splitting(&self) -> f64 {
        self.energies[0] - self.energies[1]
    }

    pub fn basis(&self) -> Vec<StateVector> {
        self.states.to_vec()
    }
}

/// The doublets `1 <= n <= n_max` of a resonant spec.
pub fn jc_doublets(spec: &JaynesCummingsSpec) -> Result<Vec<Doublet>> {
    spec.check()?;
    if !spec.is_resonant() {
        return Err(Error::OffResonance {
            omega0: spec.omega0,
            two_ez: 2.0 * spec.e_z,
        });
    }
    let d = spec.dim();
    let r = core::f64::consts::FRAC_1_SQRT_2;
    Ok((1..=spec.n_max)
        .map(|n| {
            let make = |sign: f64| {
                let mut amps = alloc::vec![0.0; d];
                amps[JaynesCummingsSpec::index(n, true)] = r;
                amps[JaynesCummingsSpec::index(n - 1, false)] = sign * r;
                StateVector::from_real(&amps)
            };
            let base = n as f64 * spec.omega0 - spec.e_z;
            let shift = spec.j * (n as f64).sqrt();
            Doublet {
                n,
                states: [make(1.0), make(-1.0)],
                energies: [base + shift, base - shift],
            }
        })
        .collect())
}
