//! Orthonormal 2D DCT-II and multi-level 2D Haar wavelet transforms.
//!
//! Both transforms use orthonormal scaling, so they preserve energy.

use thiserror::Error;

use crate::imaging::PixelGrid;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectralError {
    #[error("transform needs a square grid of side >= 2, got {width}x{height}")]
    NonSquareInput { width: usize, height: usize },
    #[error("side {side} is not divisible by 2^{levels} (levels must be >= 1)")]
    BadLevelCount { side: usize, levels: u32 },
    #[error("coefficient grid needs {expected} values, got {actual}")]
    BadLength { expected: usize, actual: usize },
}

/// Read access to a row-major grid of reals.
pub trait RealGrid {
    fn width(&self) -> usize;
    fn height(&self) -> usize;
    fn values(&self) -> &[f64];
}

impl RealGrid for PixelGrid {
    fn width(&self) -> usize {
        PixelGrid::width(self)
    }
    fn height(&self) -> usize {
        PixelGrid::height(self)
    }
    fn values(&self) -> &[f64] {
        self.data()
    }
}

/// Row-major grid of real transform coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffGrid {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl CoeffGrid {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self, SpectralError> {
        if data.len() != width * height {
            return Err(SpectralError::BadLength { expected: width * height, actual: data.len() });
        }
        Ok(Self { width, height, data })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self { width, height, data: vec![0.0; width * height] }
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.width + c] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    /// Copies the `size`×`size` block anchored at the top-left corner.
    pub fn top_left(&self, size: usize) -> Vec<f64> {
        (0..size).flat_map(|r| self.data[r * self.width..r * self.width + size].iter().copied()).collect()
    }

    pub fn energy(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }
}

impl RealGrid for CoeffGrid {
    fn width(&self) -> usize {
        self.width
    }
    fn height(&self) -> usize {
        self.height
    }
    fn values(&self) -> &[f64] {
        &self.data
    }
}

impl From<&PixelGrid> for CoeffGrid {
    fn from(g: &PixelGrid) -> Self {
        Self { width: g.width(), height: g.height(), data: g.data().to_vec() }
    }
}

fn square_side(grid: &impl RealGrid) -> Result<usize, SpectralError> {
    let (w, h) = (grid.width(), grid.height());
    if w != h || w < 2 {
        return Err(SpectralError::NonSquareInput { width: w, height: h });
    }
    Ok(w)
}

/// Orthonormal DCT-II basis: `basis[u * n + r] = α(u) cos(π (2r + 1) u / 2n)`.
#[derive(Debug, Clone)]
pub struct DctBasis {
    n: usize,
    basis: Vec<f64>,
}

impl DctBasis {
    pub fn new(n: usize) -> Self {
        let mut basis = Vec::with_capacity(n * n);
        for u in 0..n {
            let alpha = if u == 0 { (1.0 / n as f64).sqrt() } else { (2.0 / n as f64).sqrt() };
            for r in 0..n {
                let angle = std::f64::consts::PI * ((2 * r + 1) * u) as f64 / (2 * n) as f64;
                basis.push(alpha * angle.cos());
            }
        }
        Self { n, basis }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Lowest `k`×`k` frequencies of the forward transform of an `n`×`n`
    /// row-major input. Computes only what is returned.
    pub fn forward_low(&self, input: &[f64], k: usize) -> Vec<f64> {
        let n = self.n;
        assert_eq!(input.len(), n * n);
        assert!(k <= n);
        // tmp[u][c] = Σ_r B[u][r] x[r][c]
        let mut tmp = vec![0.0; k * n];
        for u in 0..k {
            let b = &self.basis[u * n..(u + 1) * n];
            let row = &mut tmp[u * n..(u + 1) * n];
            for (r, &w) in b.iter().enumerate() {
                let x = &input[r * n..(r + 1) * n];
                for (acc, &v) in row.iter_mut().zip(x) {
                    *acc += w * v;
                }
            }
        }
        // out[u][v] = Σ_c tmp[u][c] B[v][c]
        let mut out = vec![0.0; k * k];
        for u in 0..k {
            let t = &tmp[u * n..(u + 1) * n];
            for v in 0..k {
                let b = &self.basis[v * n..(v + 1) * n];
                out[u * k + v] = t.iter().zip(b).map(|(a, b)| a * b).sum();
            }
        }
        out
    }

    pub fn forward(&self, input: &[f64]) -> Vec<f64> {
        self.forward_low(input, self.n)
    }

    /// Inverse transform: `x = Bᵀ X B`.
    pub fn inverse(&self, coeffs: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(coeffs.len(), n * n);
        // tmp[r][v] = Σ_u B[u][r] X[u][v]
        let mut tmp = vec![0.0; n * n];
        for u in 0..n {
            let x = &coeffs[u * n..(u + 1) * n];
            for r in 0..n {
                let w = self.basis[u * n + r];
                let row = &mut tmp[r * n..(r + 1) * n];
                for (acc, &v) in row.iter_mut().zip(x) {
                    *acc += w * v;
                }
            }
        }
        // out[r][c] = Σ_v tmp[r][v] B[v][c]
        let mut out = vec![0.0; n * n];
        for r in 0..n {
            for c in 0..n {
                out[r * n + c] = (0..n).map(|v| tmp[r * n + v] * self.basis[v * n + c]).sum();
            }
        }
        out
    }
}

/// Orthonormal 2D DCT-II of a square grid.
pub fn dct2(grid: &impl RealGrid) -> Result<CoeffGrid, SpectralError> {
    let n = square_side(grid)?;
    let data = DctBasis::new(n).forward(grid.values());
    Ok(CoeffGrid { width: n, height: n, data })
}

/// Inverse of [`dct2`]. Returns raw reals; callers that need intensities
/// convert with [`PixelGrid::new`].
pub fn idct2(coeffs: &impl RealGrid) -> Result<CoeffGrid, SpectralError> {
    let n = square_side(coeffs)?;
    let data = DctBasis::new(n).inverse(coeffs.values());
    Ok(CoeffGrid { width: n, height: n, data })
}

const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// One analysis step on `len` strided samples: lows to the first half,
/// highs to the second.
fn haar_step(data: &mut [f64], start: usize, stride: usize, len: usize, scratch: &mut [f64]) {
    let half = len / 2;
    for i in 0..half {
        let a = data[start + 2 * i * stride];
        let b = data[start + (2 * i + 1) * stride];
        scratch[i] = (a + b) * INV_SQRT2;
        scratch[half + i] = (a - b) * INV_SQRT2;
    }
    for (i, v) in scratch[..len].iter().enumerate() {
        data[start + i * stride] = *v;
    }
}

/// Multi-level separable Haar DWT in the packed (Mallat) layout.
///
/// Each level transforms the rows and then the columns of the current
/// top-left approximation block and recurses on its LL quadrant. After
/// `levels` steps the top-left `(n / 2^levels)²` block holds the LL band.
pub fn haar_dwt2(grid: &impl RealGrid, levels: u32) -> Result<CoeffGrid, SpectralError> {
    let n = square_side(grid)?;
    if levels == 0 || levels >= usize::BITS || n % (1usize << levels) != 0 {
        return Err(SpectralError::BadLevelCount { side: n, levels });
    }
    let mut data = grid.values().to_vec();
    let mut scratch = vec![0.0; n];
    let mut size = n;
    for _ in 0..levels {
        for r in 0..size {
            haar_step(&mut data, r * n, 1, size, &mut scratch);
        }
        for c in 0..size {
            haar_step(&mut data, c, n, size, &mut scratch);
        }
        size /= 2;
    }
    Ok(CoeffGrid { width: n, height: n, data })
}
