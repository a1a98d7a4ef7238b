//! The two diagonal counterexample channels on `ℂ⁴` and `ℂ⁶`.

use crate::channels::KrausChannel;
use crate::matcore::{diag, ComplexMatrix};
use crate::scalar::{c, cis, Real};
use crate::schur::{twirl, SchurMatrix};

/// `E₁ = Diag(1, 0, 1/√2, 1/√2)`, `E₂ = Diag(0, 1, 1/√2, −i/√2)`.
pub fn example1<T: Real>() -> KrausChannel<T> {
    let r = 0.5f64.sqrt();
    KrausChannel::new(vec![
        diag(&[c(1., 0.), c(0., 0.), c(r, 0.), c(r, 0.)]),
        diag(&[c(0., 0.), c(1., 0.), c(r, 0.), c(0., -r)]),
    ])
    .expect("example 1 Kraus operators are consistent")
}

/// `Z₅ = Diag(ω^k)`, `ω = e^{2πi/5}`.
pub fn z5<T: Real>() -> ComplexMatrix<T> {
    let w: Vec<_> = (0..5)
        .map(|k| cis(T::lit(2.0 * std::f64::consts::PI * k as f64 / 5.0)))
        .collect();
    diag(&w)
}

/// `E₁ = Diag(1, I₅/√5)`, `E₂ = Diag(0, √(2/5) Z₅)`, `E₃ = E₂†`.
pub fn example2<T: Real>() -> KrausChannel<T> {
    let mut e1 = vec![c(1., 0.)];
    e1.extend(std::iter::repeat_n(c(0.2f64.sqrt(), 0.), 5));
    let a = T::lit(0.4f64.sqrt());
    let z = z5::<T>();
    let mut e2 = vec![c(0., 0.)];
    e2.extend((0..5).map(|k| z[(k, k)].scale(a)));
    let e3: Vec<_> = e2.iter().map(|x| x.conj()).collect();
    KrausChannel::new(vec![diag(&e1), diag(&e2), diag(&e3)]).expect("example 2 Kraus operators are consistent")
}

/// Schur matrix of a diagonal-Kraus channel.
pub fn schur_of<T: Real>(ch: &KrausChannel<T>) -> SchurMatrix<T> {
    twirl(ch).expect("square channel").matrix()
}

pub fn example1_schur<T: Real>() -> SchurMatrix<T> {
    schur_of(&example1())
}

pub fn example2_schur<T: Real>() -> SchurMatrix<T> {
    schur_of(&example2())
}

/// Built-in channel by name.
pub fn by_name(name: &str) -> Option<KrausChannel<f64>> {
    match name {
        "example1" => Some(example1()),
        "example2" => Some(example2()),
        _ => None,
    }
}
