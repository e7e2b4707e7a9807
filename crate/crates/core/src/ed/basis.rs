use nalgebra::{DMatrix, DVector};

/// Which part of the `2^N` spin space to work in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Sector {
    Full,
    /// `prod_j sz_j = +1`, the sector holding the finite-ring ground state
    /// and every state reachable from it by parity-even operators.
    #[default]
    EvenParity,
}

/// Computational basis of `N` spins, bit `j` set meaning spin `j` up.
#[derive(Clone, Debug)]
pub struct Basis {
    sites: usize,
    sector: Sector,
    states: Vec<u32>,
    index: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl Basis {
    pub fn new(sites: usize, sector: Sector) -> Self {
        let dim = 1usize << sites;
        let states: Vec<u32> = (0..dim as u32)
            .filter(|s| match sector {
                Sector::Full => true,
                Sector::EvenParity => (sites as u32 - s.count_ones()) % 2 == 0,
            })
            .collect();
        let mut index = vec![ABSENT; dim];
        for (i, &s) in states.iter().enumerate() {
            index[s as usize] = i as u32;
        }
        Self { sites, sector, states, index }
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, i: usize) -> u32 {
        self.states[i]
    }

    pub fn index_of(&self, state: u32) -> Option<usize> {
        match self.index[state as usize] {
            ABSENT => None,
            i => Some(i as usize),
        }
    }

    /// Eigenvalue of `prod_j sz_j` on basis state `i`.
    pub fn parity(&self, i: usize) -> f64 {
        if (self.sites as u32 - self.states[i].count_ones()) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Real operator in coordinate format on a [`Basis`].
#[derive(Clone, Debug)]
pub struct SparseOperator {
    dim: usize,
    entries: Vec<(u32, u32, f64)>,
}

impl SparseOperator {
    pub fn new(dim: usize) -> Self {
        Self { dim, entries: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn push(&mut self, row: usize, col: usize, value: f64) {
        if value != 0.0 {
            self.entries.push((row as u32, col as u32, value));
        }
    }

    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim);
        for &(r, c, x) in &self.entries {
            out[r as usize] += x * v[c as usize];
        }
        out
    }

    /// `<u| O |v>`.
    pub fn matrix_element(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        self.entries.iter().map(|&(r, c, x)| u[r as usize] * x * v[c as usize]).sum()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &(r, c, x) in &self.entries {
            m[(r as usize, c as usize)] += x;
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Pauli {
    X,
    Y,
    Z,
}

/// `coefficient * prod sigma^{p}_{site}` acting on `state`. Returns the image
/// state and the amplitude, which is real whenever the number of `Y`
/// factors is even.
pub(crate) fn apply_string(factors: &[(Pauli, usize)], state: u32) -> (u32, f64) {
    let mut s = state;
    let mut sign = 1.0;
    let mut i_power = 0u32;
    for &(p, j) in factors {
        let up = (s >> j) & 1 == 1;
        match p {
            Pauli::X => s ^= 1 << j,
            Pauli::Y => {
                // sy|up> = i|down>, sy|down> = -i|up>
                i_power += 1;
                if !up {
                    sign = -sign;
                }
                s ^= 1 << j;
            }
            Pauli::Z => {
                if !up {
                    sign = -sign;
                }
            }
        }
    }
    assert!(i_power % 2 == 0, "Pauli string with an odd number of sy is not real");
    if i_power % 4 == 2 {
        sign = -sign;
    }
    (s, sign)
}
