//! Welch spectral estimation and the Lorentzian line fit.

use rustfft::{num_complex::Complex, FftPlanner};

use crate::constants::KB;
use crate::environment::GasState;
use crate::error::{Error, Result};
use crate::scattering::ParticleSpec;

use super::fits::{levenberg_marquardt, LmOptions};

/// Taper applied to each Welch segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    Hann,
}

impl Window {
    fn coefficient(self, i: usize, n: usize) -> f64 {
        match self {
            Window::Hann => {
                let x = std::f64::consts::PI * i as f64 / n as f64;
                let s = x.sin();
                s * s
            }
        }
    }
}

/// One-sided power spectral density estimate.
#[derive(Debug, Clone)]
pub struct PsdEstimate {
    /// Frequency grid, Hz (DC through Nyquist).
    pub frequency: Vec<f64>,
    /// Spectral density, (signal unit)²/Hz.
    pub psd: Vec<f64>,
    pub n_segments: usize,
    pub window: Window,
    /// Grid spacing, Hz.
    pub df: f64,
    /// `∫S df / ⟨x²⟩`; 1 within estimator noise when the window-power
    /// normalization is consistent.
    pub parseval_ratio: f64,
}

impl PsdEstimate {
    /// Integral of the density over frequency, (signal unit)².
    pub fn total_power(&self) -> f64 {
        self.psd.iter().sum::<f64>() * self.df
    }
}

/// Welch estimate with `n_segments` half-overlapping windowed segments.
///
/// One-sided, window-power corrected: the density integrates to the mean
/// square of the series (Parseval) up to estimator noise.
pub fn welch_psd(series: &[f64], dt: f64, n_segments: usize, window: Window) -> Result<PsdEstimate> {
    if n_segments == 0 {
        return Err(Error::InvalidConfig("need at least one segment".into()));
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidConfig("dt must be > 0".into()));
    }
    if series.len() < 2 * n_segments * 8 {
        return Err(Error::EstimatorVariance(format!(
            "series of {} samples too short for {} segments",
            series.len(),
            n_segments
        )));
    }
    // 50% overlap: n_segments segments of length L conceal (n_segments+1)/2 L samples
    let seg_len = 2 * series.len() / (n_segments + 1);
    let hop = seg_len / 2;
    let seg_len = hop * 2; // keep it even
    let n_bins = seg_len / 2 + 1;
    let fs = 1.0 / dt;

    let win: Vec<f64> = (0..seg_len).map(|i| window.coefficient(i, seg_len)).collect();
    let window_power: f64 = win.iter().map(|w| w * w).sum();

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(seg_len);
    let mut acc = vec![0.0f64; n_bins];
    let mut buf = vec![Complex::new(0.0, 0.0); seg_len];
    let mut actual_segments = 0usize;
    let mut start = 0usize;
    while start + seg_len <= series.len() && actual_segments < n_segments {
        for (i, slot) in buf.iter_mut().enumerate() {
            *slot = Complex::new(series[start + i] * win[i], 0.0);
        }
        fft.process(&mut buf);
        for (k, a) in acc.iter_mut().enumerate() {
            *a += buf[k].norm_sqr();
        }
        start += hop;
        actual_segments += 1;
    }

    let norm = 1.0 / (fs * window_power * actual_segments as f64);
    let mut psd: Vec<f64> = acc
        .iter()
        .enumerate()
        .map(|(k, &a)| {
            let one_sided = if k == 0 || k == seg_len / 2 { 1.0 } else { 2.0 };
            a * norm * one_sided
        })
        .collect();
    // guard tiny negative rounding
    for v in psd.iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let df = fs / seg_len as f64;
    let frequency: Vec<f64> = (0..n_bins).map(|k| k as f64 * df).collect();
    let mean_square = series.iter().map(|x| x * x).sum::<f64>() / series.len() as f64;
    let total: f64 = psd.iter().sum::<f64>() * df;
    let parseval_ratio = if mean_square > 0.0 { total / mean_square } else { 1.0 };

    Ok(PsdEstimate {
        frequency,
        psd,
        n_segments: actual_segments,
        window,
        df,
        parseval_ratio,
    })
}

/// One-sided position spectral density of a damped thermal oscillator,
/// m²/Hz: `S(f) = 4γk_BT / (M[(ω₀²−ω²)² + γ²ω²])` with `ω = 2πf`.
/// Integrates to `k_BT/(Mω₀²)`.
pub fn lorentzian_psd_model(f: f64, mass: f64, omega0: f64, gamma: f64, temperature: f64) -> f64 {
    let omega = 2.0 * std::f64::consts::PI * f;
    let d = omega0 * omega0 - omega * omega;
    4.0 * gamma * KB * temperature / (mass * (d * d + gamma * gamma * omega * omega))
}

/// Result of [`lorentzian_fit`].
#[derive(Debug, Clone, Copy)]
pub struct LorentzianFit {
    /// Resonance angular frequency, rad/s.
    pub omega0: f64,
    /// Linewidth (total damping), rad/s.
    pub gamma: f64,
    /// Flat background level, (signal unit)²/Hz.
    pub plateau: f64,
    /// Peak amplitude parameter `A` of `A/((ω₀²−ω²)² + γ²ω²)`.
    pub amplitude: f64,
}

/// Least-squares fit of `S(ω) = A/((ω₀²−ω²)² + γ²ω²) + plateau` to a PSD
/// with a single resolved peak.
pub fn lorentzian_fit(psd: &PsdEstimate) -> Result<LorentzianFit> {
    if psd.psd.len() < 16 {
        return Err(Error::Fit("PSD has too few bins".into()));
    }
    // skip DC when hunting for the peak
    let (peak_idx, &peak_val) = psd
        .psd
        .iter()
        .enumerate()
        .skip(1)
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap();
    let mut sorted = psd.psd.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = sorted[sorted.len() / 2];
    if !(peak_val > 5.0 * median) || peak_idx + 1 >= psd.psd.len() {
        return Err(Error::Fit(format!(
            "no resolved peak (max {peak_val:.3e} vs median {median:.3e})"
        )));
    }

    let f_peak = psd.frequency[peak_idx];
    let omega0_init = 2.0 * std::f64::consts::PI * f_peak;
    // half-maximum crossing on each side for the width guess
    let half = 0.5 * peak_val;
    let mut right = peak_idx;
    while right + 1 < psd.psd.len() && psd.psd[right] > half {
        right += 1;
    }
    let mut left = peak_idx;
    while left > 1 && psd.psd[left] > half {
        left -= 1;
    }
    let fwhm_f = (psd.frequency[right] - psd.frequency[left]).max(psd.df);
    let gamma_init = 2.0 * std::f64::consts::PI * fwhm_f;
    let amplitude_init = peak_val * gamma_init * gamma_init * omega0_init * omega0_init;
    let plateau_init = median.max(1e-300);

    let freqs: Vec<f64> = psd.frequency.iter().skip(1).copied().collect();
    let values: Vec<f64> = psd.psd.iter().skip(1).copied().collect();
    // fit in scaled parameters to keep the normal equations conditioned
    let scale_w = omega0_init;
    let scale_s = peak_val;
    let model = |p: &[f64], out: &mut Vec<f64>| {
        let a = p[0] * scale_s * (scale_w).powi(4);
        let w0 = p[1] * scale_w;
        let g = p[2] * scale_w;
        let plat = p[3] * scale_s;
        out.clear();
        for (&f, &v) in freqs.iter().zip(&values) {
            let w = 2.0 * std::f64::consts::PI * f;
            let d = w0 * w0 - w * w;
            let m = a / (d * d + g * g * w * w) + plat;
            out.push((m - v) / scale_s);
        }
    };
    let p0 = [
        amplitude_init / (scale_s * scale_w.powi(4)),
        1.0,
        gamma_init / scale_w,
        plateau_init / scale_s,
    ];
    let fit = levenberg_marquardt(model, &p0, &LmOptions::default())?;
    let omega0 = (fit.params[1] * scale_w).abs();
    let gamma = (fit.params[2] * scale_w).abs();
    if !omega0.is_finite() || !gamma.is_finite() || gamma <= 0.0 {
        return Err(Error::Fit("Lorentzian fit diverged".into()));
    }
    Ok(LorentzianFit {
        omega0,
        gamma,
        plateau: fit.params[3] * scale_s,
        amplitude: fit.params[0] * scale_s * scale_w.powi(4),
    })
}

/// Sphere radius implied by a measured gas-damping linewidth, inverting the
/// free-molecular drag law at the given gas state.
pub fn radius_from_linewidth(gamma: f64, gas: &GasState, density: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::Domain("linewidth must be > 0".into()));
    }
    let probe = ParticleSpec::new(1e-7, density, 1.45)?;
    let gamma_ref = crate::environment::gas_damping(&probe, gas);
    Ok(probe.radius * gamma_ref / gamma)
}
