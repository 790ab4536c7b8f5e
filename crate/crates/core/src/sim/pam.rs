//! Pulse amplitude modulation alphabets with bit labelling and soft demapping.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// How bit labels are assigned to PAM levels (in increasing order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Labelling {
    Natural,
    Gray,
}

/// Equally likely, equally spaced, zero-mean levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolSet {
    levels: Vec<f64>,
    energy: f64,
    labelling: Labelling,
}

/// `M`-PAM with mean square `energy` and natural labelling.
pub fn make_pam(m: usize, energy: f64) -> Result<SymbolSet> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("PAM order must be at least 2, got {m}")));
    }
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(Error::InvalidParameter(format!("symbol energy must be positive, got {energy}")));
    }
    let mf = m as f64;
    let scale = (3.0 * energy / (mf * mf - 1.0)).sqrt();
    let levels = (0..m).map(|k| scale * (2.0 * k as f64 - (mf - 1.0))).collect();
    Ok(SymbolSet {
        levels,
        energy,
        labelling: Labelling::Natural,
    })
}

impl SymbolSet {
    pub fn with_labelling(mut self, labelling: Labelling) -> Self {
        self.labelling = labelling;
        self
    }

    /// Alphabet size `M`.
    pub fn m(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Mean square of the levels.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn labelling(&self) -> Labelling {
        self.labelling
    }

    /// Bits carried per symbol; `None` unless `M` is a power of two.
    pub fn bits_per_symbol(&self) -> Option<usize> {
        let m = self.m();
        m.is_power_of_two().then(|| m.trailing_zeros() as usize)
    }

    /// Bit label of the level with index `index`.
    pub fn label_of(&self, index: usize) -> usize {
        match self.labelling {
            Labelling::Natural => index,
            Labelling::Gray => index ^ (index >> 1),
        }
    }

    /// Level index carrying `label`.
    pub fn index_of(&self, label: usize) -> usize {
        match self.labelling {
            Labelling::Natural => label,
            Labelling::Gray => {
                let mut index = label;
                let mut shift = label >> 1;
                while shift != 0 {
                    index ^= shift;
                    shift >>= 1;
                }
                index
            }
        }
    }

    /// Level for a group of bits, most significant first.
    pub fn modulate(&self, bits: &[u8]) -> f64 {
        let label = bits.iter().fold(0usize, |acc, &b| (acc << 1) | (b & 1) as usize);
        self.levels[self.index_of(label)]
    }

    /// Index of the level nearest to `obs / gain`.
    pub fn hard_decision(&self, obs: f64, gain: f64) -> usize {
        let x = obs / gain;
        let mut best = 0;
        for (k, level) in self.levels.iter().enumerate() {
            if (x - level).abs() < (x - self.levels[best]).abs() {
                best = k;
            }
        }
        best
    }

    /// Bits of the label of level `index`, most significant first.
    pub fn label_bits(&self, index: usize) -> Vec<u8> {
        let k = self.bits_per_symbol().unwrap_or(0);
        let label = self.label_of(index);
        (0..k).rev().map(|b| ((label >> b) & 1) as u8).collect()
    }

    /// Exact bit log-likelihood ratios `ln P(b = 0 | obs) / P(b = 1 | obs)` for
    /// `obs = gain * theta + w`, `w ~ N(0, noise_var)`.
    pub fn bit_llrs(&self, obs: f64, gain: f64, noise_var: f64) -> Vec<f64> {
        let k = self.bits_per_symbol().unwrap_or(0);
        let metrics: Vec<f64> = self
            .levels
            .iter()
            .map(|level| {
                let d = obs - gain * level;
                -d * d / (2.0 * noise_var)
            })
            .collect();
        (0..k)
            .map(|bit| {
                let shift = k - 1 - bit;
                let (mut zero, mut one) = (Vec::new(), Vec::new());
                for (index, m) in metrics.iter().enumerate() {
                    if (self.label_of(index) >> shift) & 1 == 0 {
                        zero.push(*m);
                    } else {
                        one.push(*m);
                    }
                }
                log_sum_exp(&zero) - log_sum_exp(&one)
            })
            .collect()
    }
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + v.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}
