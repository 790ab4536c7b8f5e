//! Small outer codes for the concatenated scheme.
//!
//! Codes work on bits; the simulator groups coded bits into PAM symbols.
//! Decoders take bit log-likelihood ratios (positive favours 0).

use crate::error::{Error, Result};

pub trait OuterCode: Send + Sync {
    /// Information bits per block.
    fn k_info(&self) -> usize;
    /// Coded bits per block.
    fn n_coded(&self) -> usize;
    fn encode(&self, info: &[u8]) -> Vec<u8>;
    fn decode(&self, llrs: &[f64]) -> Vec<u8>;
    fn name(&self) -> String;
}

fn slice(llr: f64) -> u8 {
    u8::from(llr < 0.0)
}

/// Uncoded transmission of `k` bits per block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Identity {
    pub k: usize,
}

impl OuterCode for Identity {
    fn k_info(&self) -> usize {
        self.k
    }

    fn n_coded(&self) -> usize {
        self.k
    }

    fn encode(&self, info: &[u8]) -> Vec<u8> {
        info.to_vec()
    }

    fn decode(&self, llrs: &[f64]) -> Vec<u8> {
        llrs.iter().map(|l| slice(*l)).collect()
    }

    fn name(&self) -> String {
        format!("identity({})", self.k)
    }
}

/// `r`-fold repetition with soft combining of the copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Repetition {
    r: usize,
}

impl Repetition {
    pub fn new(r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParameter("repetition factor must be positive".into()));
        }
        Ok(Repetition { r })
    }

    pub fn factor(&self) -> usize {
        self.r
    }
}

impl OuterCode for Repetition {
    fn k_info(&self) -> usize {
        1
    }

    fn n_coded(&self) -> usize {
        self.r
    }

    fn encode(&self, info: &[u8]) -> Vec<u8> {
        vec![info[0]; self.r]
    }

    fn decode(&self, llrs: &[f64]) -> Vec<u8> {
        vec![slice(llrs.iter().sum())]
    }

    fn name(&self) -> String {
        format!("repetition({})", self.r)
    }
}

/// Systematic Hamming(7,4) with hard-decision syndrome decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Hamming74;

impl Hamming74 {
    /// Parity bits `p1 p2 p3` of data `d1 d2 d3 d4`; codeword is `d1 d2 d3 d4 p1 p2 p3`.
    fn parity(d: &[u8]) -> [u8; 3] {
        [d[0] ^ d[1] ^ d[3], d[0] ^ d[2] ^ d[3], d[1] ^ d[2] ^ d[3]]
    }

    /// Column of the parity-check matrix for each codeword position.
    const COLUMNS: [[u8; 3]; 7] = [
        [1, 1, 0],
        [1, 0, 1],
        [0, 1, 1],
        [1, 1, 1],
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
    ];
}

impl OuterCode for Hamming74 {
    fn k_info(&self) -> usize {
        4
    }

    fn n_coded(&self) -> usize {
        7
    }

    fn encode(&self, info: &[u8]) -> Vec<u8> {
        let mut c = info[..4].to_vec();
        c.extend_from_slice(&Self::parity(info));
        c
    }

    fn decode(&self, llrs: &[f64]) -> Vec<u8> {
        let mut c: Vec<u8> = llrs.iter().map(|l| slice(*l)).collect();
        let p = Self::parity(&c[..4]);
        let syndrome = [p[0] ^ c[4], p[1] ^ c[5], p[2] ^ c[6]];
        if syndrome != [0, 0, 0] {
            if let Some(pos) = Self::COLUMNS.iter().position(|col| *col == syndrome) {
                c[pos] ^= 1;
            }
        }
        c.truncate(4);
        c
    }

    fn name(&self) -> String {
        "hamming(7,4)".into()
    }
}
