use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// State of `N0`: the object, the camera and the measurement noise source.
#[derive(Debug, Clone, PartialEq)]
pub struct ServoWorld {
    pub step: u64,
    pub t: f64,
    pub true_position: f64,
    pub camera_position: f64,
    /// measurement noise for the current step, already scaled
    pub noise: f64,
    pub k: f64,
    pub noise_sigma: f64,
    rng: ChaCha8Rng,
}

impl ServoWorld {
    /// Object at rest at the origin, camera on it.
    pub fn new(k: f64, noise_sigma: f64, seed: u64) -> Self {
        ServoWorld {
            step: 0,
            t: 0.0,
            true_position: 0.0,
            camera_position: 0.0,
            noise: 0.0,
            k,
            noise_sigma,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Moves time forward one step and draws the noise the next
    /// measurement will carry. Position is the closed form `½·k·t²`.
    pub fn advance(&self, dt: f64) -> Self {
        let mut next = self.clone();
        next.step += 1;
        next.t = next.step as f64 * dt;
        next.true_position = 0.5 * next.k * next.t * next.t;
        let z: f64 = next.rng.sample(StandardNormal);
        next.noise = next.noise_sigma * z;
        next
    }

    pub fn measurement(&self) -> f64 {
        self.true_position + self.noise
    }

    pub fn tracking_error(&self) -> f64 {
        (self.camera_position - self.true_position).abs()
    }
}
