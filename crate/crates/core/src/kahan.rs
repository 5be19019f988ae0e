//! Compensated summation.

use num_complex::Complex;
use num_traits::Float;
use rayon::prelude::*;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum<F> {
    sum: F,
    compensation: F,
}

impl<F: Float> KahanSum<F> {
    pub fn new() -> Self {
        KahanSum {
            sum: F::zero(),
            compensation: F::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, value: F) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation = self.compensation + ((self.sum - t) + value);
        } else {
            self.compensation = self.compensation + ((value - t) + self.sum);
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> F {
        self.sum + self.compensation
    }
}

impl<F: Float> FromIterator<F> for KahanSum<F> {
    fn from_iter<I: IntoIterator<Item = F>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated accumulator for complex values (real and imaginary parts
/// compensated independently).
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexKahan {
    re: KahanSum<f64>,
    im: KahanSum<f64>,
}

impl ComplexKahan {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex<f64>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex<f64> {
        Complex::new(self.re.value(), self.im.value())
    }

    /// Folds another accumulator in, carrying its compensation terms along.
    pub fn merge(&mut self, other: &ComplexKahan) {
        self.re.add(other.re.sum);
        self.re.add(other.re.compensation);
        self.im.add(other.im.sum);
        self.im.add(other.im.compensation);
    }
}

/// Default partition size for chunk-parallel sums.
pub const CHUNK: usize = 8192;

/// Sums `f(item)` over `items` chunk-parallel: every chunk is summed with
/// compensation, then chunk totals are combined in index order. The result
/// depends only on the chunk size, never on thread scheduling.
pub fn par_complex_sum<T, G>(items: &[T], chunk: usize, f: G) -> Complex<f64>
where
    T: Sync,
    G: Fn(&T) -> Complex<f64> + Sync,
{
    let partials: Vec<ComplexKahan> = items
        .par_chunks(chunk.max(1))
        .map(|c| {
            let mut acc = ComplexKahan::new();
            for item in c {
                acc.add(f(item));
            }
            acc
        })
        .collect();
    let mut total = ComplexKahan::new();
    for p in &partials {
        total.merge(p);
    }
    total.value()
}
