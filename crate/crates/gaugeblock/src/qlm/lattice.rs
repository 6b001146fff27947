//! Open-chain geometry and bit-packed spin configurations.

use super::QlmError;

/// An open chain of matter sites with fixed background fields standing in
/// for the two links that are missing at the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeSpec {
    n_sites: usize,
    boundary_left: i8,
    boundary_right: i8,
}

impl LatticeSpec {
    /// Default boundary convention b_L = b_R = -1.
    pub fn new(n_sites: usize) -> Result<Self, QlmError> {
        Self::with_boundary(n_sites, -1, -1)
    }

    pub fn with_boundary(n_sites: usize, b_left: i8, b_right: i8) -> Result<Self, QlmError> {
        if n_sites < 2 {
            return Err(QlmError::UnsupportedLattice {
                n_sites,
                reason: "need at least two matter sites".into(),
            });
        }
        if n_sites > 16 {
            return Err(QlmError::UnsupportedLattice {
                n_sites,
                reason: "configurations are packed into 16-bit words".into(),
            });
        }
        assert!(b_left == 1 || b_left == -1, "boundary fields are +1 or -1");
        assert!(b_right == 1 || b_right == -1, "boundary fields are +1 or -1");
        Ok(LatticeSpec {
            n_sites,
            boundary_left: b_left,
            boundary_right: b_right,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_links(&self) -> usize {
        self.n_sites - 1
    }

    /// Background tau^z value substituted left of site 1.
    pub fn boundary_left(&self) -> f64 {
        self.boundary_left as f64
    }

    /// Background tau^z value substituted right of site L.
    pub fn boundary_right(&self) -> f64 {
        self.boundary_right as f64
    }

    /// Total qubits in the interleaved pattern m1 l1 m2 l2 ... mL.
    pub fn n_qubits(&self) -> usize {
        2 * self.n_sites - 1
    }
}

/// One product configuration of the chain: L matter bits and L-1 link bits.
/// Bit 1 on a site means occupied (sigma^z = -1); bit 1 on a link means the
/// field points right (tau^z = -1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChainConfig {
    n_sites: u8,
    matter: u16,
    links: u16,
}

impl ChainConfig {
    pub fn new(lattice: &LatticeSpec, matter: u16, links: u16) -> Self {
        let l = lattice.n_sites();
        debug_assert!(matter >> l == 0, "matter bits beyond site count");
        debug_assert!(l == 16 || links >> (l - 1) == 0, "link bits beyond link count");
        ChainConfig {
            n_sites: l as u8,
            matter,
            links,
        }
    }

    /// Parse an interleaved ket string "m1 l1 m2 l2 ... mL" such as "0011001".
    pub fn from_ket(lattice: &LatticeSpec, ket: &str) -> Result<Self, QlmError> {
        let bits: Vec<u16> = ket
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(QlmError::UnsupportedLattice {
                    n_sites: lattice.n_sites(),
                    reason: format!("bad ket character '{other}'"),
                }),
            })
            .collect::<Result<_, _>>()?;
        if bits.len() != lattice.n_qubits() {
            return Err(QlmError::UnsupportedLattice {
                n_sites: lattice.n_sites(),
                reason: format!(
                    "ket '{ket}' has {} qubits, lattice needs {}",
                    bits.len(),
                    lattice.n_qubits()
                ),
            });
        }
        let mut matter = 0u16;
        let mut links = 0u16;
        for (k, b) in bits.iter().enumerate() {
            if k % 2 == 0 {
                matter |= b << (k / 2);
            } else {
                links |= b << (k / 2);
            }
        }
        Ok(ChainConfig::new(lattice, matter, links))
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites as usize
    }

    pub fn n_links(&self) -> usize {
        self.n_sites as usize - 1
    }

    /// Occupation bit of matter site n (1-based).
    pub fn matter_bit(&self, site: usize) -> bool {
        debug_assert!((1..=self.n_sites()).contains(&site));
        (self.matter >> (site - 1)) & 1 == 1
    }

    /// Field bit of link n = (n, n+1) (1-based).
    pub fn link_bit(&self, link: usize) -> bool {
        debug_assert!((1..=self.n_links()).contains(&link));
        (self.links >> (link - 1)) & 1 == 1
    }

    pub fn with_matter_bit(mut self, site: usize, value: bool) -> Self {
        let mask = 1u16 << (site - 1);
        if value {
            self.matter |= mask;
        } else {
            self.matter &= !mask;
        }
        self
    }

    pub fn with_link_bit(mut self, link: usize, value: bool) -> Self {
        let mask = 1u16 << (link - 1);
        if value {
            self.links |= mask;
        } else {
            self.links &= !mask;
        }
        self
    }

    /// sigma^z eigenvalue at a site: |0> -> +1, |1> -> -1.
    pub fn sigma_z(&self, site: usize) -> f64 {
        if self.matter_bit(site) {
            -1.0
        } else {
            1.0
        }
    }

    /// tau^z eigenvalue on a link: |0> -> +1, |1> -> -1.
    pub fn tau_z(&self, link: usize) -> f64 {
        if self.link_bit(link) {
            -1.0
        } else {
            1.0
        }
    }

    /// Position in the interleaved bit pattern m1 l1 m2 l2 ... mL read as a
    /// binary number with m1 most significant. Lexicographic ket order and
    /// the row index in the full 2^(2L-1)-dimensional product space agree on
    /// this value.
    pub fn interleaved_index(&self) -> u32 {
        let nq = 2 * self.n_sites() - 1;
        let mut word = 0u32;
        for k in 0..nq {
            let bit = if k % 2 == 0 {
                (self.matter >> (k / 2)) & 1
            } else {
                (self.links >> (k / 2)) & 1
            };
            word = (word << 1) | bit as u32;
        }
        word
    }

    /// Interleaved ket string, e.g. "0011001".
    pub fn ket_string(&self) -> String {
        let nq = 2 * self.n_sites() - 1;
        (0..nq)
            .map(|k| {
                let bit = if k % 2 == 0 {
                    (self.matter >> (k / 2)) & 1
                } else {
                    (self.links >> (k / 2)) & 1
                };
                if bit == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }
}

impl std::fmt::Display for ChainConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "|{}>", self.ket_string())
    }
}
