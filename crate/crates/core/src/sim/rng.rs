//! Counter-based randomness: every random quantity of a drop is a pure
//! function of (drop seed, stream, i, j), so draws can be made lazily and in
//! any order without changing results.

use rand::RngCore;
use rand_distr::{Distribution, Gamma, StandardNormal};

pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a sequence of words into one seed.
pub(crate) fn mix(words: &[u64]) -> u64 {
    words.iter().fold(0x6a09_e667_f3bc_c909, |h, &w| splitmix64(h ^ splitmix64(w)))
}

/// Independent random streams within a drop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub(crate) enum Stream {
    /// point counts and positions
    Points = 1,
    ShadowSbsUser,
    ShadowCnUser,
    ShadowCnSbs,
    ShadowSbsSbs,
    FadeSbsUser,
    FadeSbsSbs,
    ModeMark,
    ServedSubset,
    PilotShare,
}

/// SplitMix64 generator, cheap enough to create per link.
#[derive(Debug, Clone)]
pub(crate) struct LinkRng(u64);

impl LinkRng {
    pub(crate) fn new(seed: u64, stream: Stream, i: usize, j: usize) -> Self {
        LinkRng(mix(&[seed, stream as u64, i as u64, j as u64]))
    }
}

impl RngCore for LinkRng {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        for chunk in dest.chunks_mut(8) {
            let v = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&v[..chunk.len()]);
        }
    }
}

/// Per-link channel draws for one drop.
#[derive(Debug, Clone)]
pub(crate) struct Channels {
    seed: u64,
    mu: f64,
    sigma: f64,
    fade_user: Option<Gamma<f64>>,
    fade_sbs: Option<Gamma<f64>>,
}

impl Channels {
    pub(crate) fn new(seed: u64, mu: f64, sigma: f64, k_user: f64, k_sbs: f64) -> Self {
        // shape k, scale 1/k; k = inf would mean no fading and is not allowed
        let fade = |k: f64| Gamma::new(k, 1.0 / k).ok();
        Self { seed, mu, sigma, fade_user: fade(k_user), fade_sbs: fade(k_sbs) }
    }

    /// ln of the log-normal shadowing gain on a link.
    pub(crate) fn ln_shadow(&self, stream: Stream, i: usize, j: usize) -> f64 {
        if self.sigma == 0.0 {
            return self.mu;
        }
        let z: f64 = StandardNormal.sample(&mut LinkRng::new(self.seed, stream, i, j));
        self.mu + self.sigma * z
    }

    pub(crate) fn fade(&self, stream: Stream, i: usize, j: usize) -> f64 {
        let g = match stream {
            Stream::FadeSbsUser => self.fade_user.as_ref(),
            _ => self.fade_sbs.as_ref(),
        };
        g.map_or(1.0, |g| g.sample(&mut LinkRng::new(self.seed, stream, i, j)))
    }

    pub(crate) fn uniform(&self, stream: Stream, i: usize, j: usize) -> f64 {
        let u = LinkRng::new(self.seed, stream, i, j).next_u64();
        (u >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub(crate) fn rng(&self, stream: Stream, i: usize, j: usize) -> LinkRng {
        LinkRng::new(self.seed, stream, i, j)
    }
}
