//! Small-`L` ground truth independent of the momentum-space formulas:
//! the real-space BdG matrix, a cyclic Jacobi eigensolver, and brute-force
//! enumeration of the many-body partition function.
//!
//! The BdG matrix in the basis `(c_1 .. c_L, c_1^dag .. c_L^dag)` is
//!
//! ```text
//! M = [[ h,  p],
//!      [-p, -h]]
//! ```
//!
//! with `h` the hopping/on-site block and `p` the antisymmetric pairing block.
//! Bonds that cross the boundary pick up the antiperiodic sign `-1`. With this
//! normalisation the positive eigenvalues are the quasiparticle energies
//! `eps_k`, each appearing once for `k` and once for `-k`.

use crate::error::{Error, Result};
use crate::spectrum::{ChainParams, InteractionRange, QuasiparticleSpectrum};
use crate::thermo::InverseTemperature;

/// Largest chain the BdG oracle accepts.
pub const BDG_MAX_SITES: usize = 64;

/// Largest chain the partition-function enumeration accepts.
pub const ENUMERATION_MAX_SITES: usize = 16;

const MAX_SWEEPS: usize = 100;

/// Dense symmetric matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymmetricMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    s += self.get(i, j).powi(2);
                }
            }
        }
        s.sqrt()
    }

    fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }
}

/// Real-space BdG matrix of a chain.
#[derive(Clone, Debug, PartialEq)]
pub struct BdgMatrix {
    sites: usize,
    matrix: SymmetricMatrix,
}

impl BdgMatrix {
    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim
    }

    pub fn matrix(&self) -> &SymmetricMatrix {
        &self.matrix
    }
}

// Matrix assembly reads best with explicit site indices.
#[allow(clippy::needless_range_loop)]
pub fn bdg_matrix(params: &ChainParams) -> Result<BdgMatrix> {
    params.validate()?;
    let n = params.sites;
    if n > BDG_MAX_SITES {
        return Err(Error::OracleCap {
            sites: n,
            cap: BDG_MAX_SITES,
        });
    }
    let mut h = vec![vec![0.0; n]; n];
    let mut p = vec![vec![0.0; n]; n];
    // Site j + step, folded back into the chain, with the antiperiodic sign.
    let wrap = |j: usize, step: isize| -> (usize, f64) {
        let t = j as isize + step;
        let sign = if t < 0 || t >= n as isize { -1.0 } else { 1.0 };
        (t.rem_euclid(n as isize) as usize, sign)
    };
    for j in 0..n {
        h[j][j] -= params.mu;
        for step in [1, -1] {
            let (t, s) = wrap(j, step);
            h[j][t] += -0.5 * params.hopping * s;
        }
    }
    match params.range {
        InteractionRange::ShortRange => {
            for j in 0..n {
                let (t, s) = wrap(j, 1);
                p[j][t] += 0.5 * params.pairing * s;
                let (t, s) = wrap(j, -1);
                p[j][t] -= 0.5 * params.pairing * s;
            }
        }
        InteractionRange::PowerLaw(alpha) => {
            for j in 0..n {
                for l in 1..n {
                    let (t, s) = wrap(j, l as isize);
                    let d = params.effective_distance(l) as f64;
                    p[j][t] += 0.5 * params.pairing * s / d.powf(alpha);
                }
            }
        }
    }
    let mut m = SymmetricMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, h[i][j]);
            m.set(n + i, n + j, -h[i][j]);
            m.set(i, n + j, p[i][j]);
            m.set(n + i, j, -p[i][j]);
        }
    }
    let asym = m.max_asymmetry();
    if asym > 1e-12 * m.frobenius().max(1.0) {
        return Err(Error::ContractViolation(format!(
            "BdG matrix is not symmetric ({asym:e})"
        )));
    }
    Ok(BdgMatrix {
        sites: n,
        matrix: m,
    })
}

/// All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(m: &SymmetricMatrix) -> Result<Vec<f64>> {
    let n = m.dim;
    let mut a = m.clone();
    let tol = 1e-12 * a.frobenius().max(f64::MIN_POSITIVE);
    let mut sweeps = 0;
    while a.off_diagonal_norm() > tol {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: a.off_diagonal_norm(),
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
            }
        }
        sweeps += 1;
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Non-negative half of the BdG spectrum, ascending (`L` values).
pub fn exact_spectrum(m: &BdgMatrix) -> Result<Vec<f64>> {
    let eig = symmetric_eigenvalues(&m.matrix)?;
    let half = m.sites;
    Ok(eig[half..].to_vec())
}

/// Same as [`exact_spectrum`] for an arbitrary symmetric matrix: the upper half of
/// its eigenvalues.
pub fn upper_eigenvalues(m: &SymmetricMatrix) -> Result<Vec<f64>> {
    let eig = symmetric_eigenvalues(m)?;
    Ok(eig[m.dim / 2..].to_vec())
}

/// `Z` summed over all `2^L` occupation patterns of the `L` Bogoliubov modes.
pub fn enumerate_partition(spec: &QuasiparticleSpectrum, beta: InverseTemperature) -> Result<f64> {
    let n = spec.sites();
    if n > ENUMERATION_MAX_SITES {
        return Err(Error::OracleCap {
            sites: n,
            cap: ENUMERATION_MAX_SITES,
        });
    }
    // Each positive-k energy serves k and -k.
    let modes: Vec<f64> = spec.energies().iter().flat_map(|&e| [e, e]).collect();
    let b = beta.value();
    let mut z = 0.0;
    for pattern in 0u32..(1u32 << n) {
        let energy: f64 = modes
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                if pattern >> i & 1 == 1 {
                    0.5 * e
                } else {
                    -0.5 * e
                }
            })
            .sum();
        z += (-b * energy).exp();
    }
    Ok(z)
}
