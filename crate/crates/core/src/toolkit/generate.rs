use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tournament::Tournament;

/// Name and version of the pseudorandom source behind [`Model::Random`].
///
/// The orientation of a pair `u < v` is the low bit of 32-bit word `v` of
/// ChaCha8 stream `u`, keyed by the 64-bit seed; a set bit means `u→v`. Every
/// pair therefore depends only on `(seed, u, v)`, not on `n`.
pub const GENERATOR_NAME: &str = "chacha8-pair-v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockInner {
    Random,
    Transitive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Random,
    Transitive,
    /// `i→j` iff `j − i` is a nonzero quadratic residue mod a prime `n ≡ 3 (mod 4)`.
    RotationalQr,
    /// Vertices `[0, first)` and `[first, n)`, every arc from the first block
    /// to the second.
    Blocks {
        first: usize,
        inner_first: BlockInner,
        inner_second: BlockInner,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub model: Model,
    pub n: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn random(n: usize, seed: u64) -> Self {
        GenSpec {
            model: Model::Random,
            n,
            seed,
        }
    }

    pub fn transitive(n: usize) -> Self {
        GenSpec {
            model: Model::Transitive,
            n,
            seed: 0,
        }
    }

    pub fn rotational_qr(n: usize) -> Self {
        GenSpec {
            model: Model::RotationalQr,
            n,
            seed: 0,
        }
    }

    pub fn blocks(
        first: usize,
        second: usize,
        inner_first: BlockInner,
        inner_second: BlockInner,
    ) -> Self {
        GenSpec {
            model: Model::Blocks {
                first,
                inner_first,
                inner_second,
            },
            n: first + second,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// A one-line description suitable for a `TRN` comment.
    pub fn describe(&self) -> String {
        let model = match self.model {
            Model::Random => "random".to_string(),
            Model::Transitive => "transitive".to_string(),
            Model::RotationalQr => "rotational-qr".to_string(),
            Model::Blocks {
                first,
                inner_first,
                inner_second,
            } => format!(
                "blocks first={first} inner={}/{}",
                inner_name(inner_first),
                inner_name(inner_second)
            ),
        };
        format!(
            "generator: {GENERATOR_NAME} model={model} n={} seed={}",
            self.n, self.seed
        )
    }
}

fn inner_name(inner: BlockInner) -> &'static str {
    match inner {
        BlockInner::Random => "random",
        BlockInner::Transitive => "transitive",
    }
}

/// Per-row random bits: `bits[u][v − u − 1]` orients the pair `u < v`.
struct PairBits {
    rng: ChaCha8Rng,
}

impl PairBits {
    fn new(seed: u64) -> Self {
        PairBits {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn row(&mut self, u: usize, n: usize) -> Vec<bool> {
        self.rng.set_stream(u as u64);
        self.rng.set_word_pos((u + 1) as u128);
        (u + 1..n).map(|_| self.rng.next_u32() & 1 == 1).collect()
    }
}

fn random_with(
    n: usize,
    seed: u64,
    mut fixed: impl FnMut(usize, usize) -> Option<bool>,
) -> Tournament {
    let mut bits = PairBits::new(seed);
    let rows: Vec<Vec<bool>> = (0..n).map(|u| bits.row(u, n)).collect();
    Tournament::from_pair_fn(n, |u, v| fixed(u, v).unwrap_or(rows[u][v - u - 1]))
}

fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

pub fn generate(spec: &GenSpec) -> Result<Tournament> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::input("a tournament needs at least one vertex"));
    }
    Ok(match spec.model {
        Model::Random => random_with(n, spec.seed, |_, _| None),
        Model::Transitive => Tournament::transitive(n),
        Model::RotationalQr => {
            if !is_prime(n) || n % 4 != 3 {
                return Err(Error::input(format!(
                    "rotational-qr needs a prime n ≡ 3 (mod 4), got {n}"
                )));
            }
            let mut residue = vec![false; n];
            for x in 1..n {
                residue[x * x % n] = true;
            }
            Tournament::from_pair_fn(n, |u, v| residue[v - u])
        }
        Model::Blocks {
            first,
            inner_first,
            inner_second,
        } => {
            if first == 0 || first >= n {
                return Err(Error::input("both blocks must be nonempty"));
            }
            random_with(n, spec.seed, |u, v| {
                let inner = match (u < first, v < first) {
                    (true, false) => return Some(true),
                    (true, true) => inner_first,
                    _ => inner_second,
                };
                match inner {
                    BlockInner::Transitive => Some(true),
                    BlockInner::Random => None,
                }
            })
        }
    })
}
