//! Exact operator algebra behind the spin-1/2 and spin-1 wave equations.
//!
//! The relativistic energy-momentum condition (E^2 - p^2 - m^2) I = 0
//! factors into first-order operator products once the wavefunction gets
//! enough components: 4 for the electron, 2 for the neutrino, 3 for the
//! photon and for the massive vector boson. Everything in this module
//! verifies those factorizations by direct multiplication, either over
//! exact rational complex scalars (residuals must be literally zero) or
//! over `Complex64` (residuals below [`FLOAT_RESIDUAL_TOL`]).
//!
//! Natural units c = hbar = 1 throughout.

pub mod matrix;
pub mod scalar;

pub use matrix::{
    vec3_cross, vec3_dot, vec3_is_zero, vec3_max_magnitude, vec3_scale, vec3_sub, Matrix,
};
pub use scalar::{ComplexScalar, ExactComplex};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Acceptance bound for float-mode residuals on integer inputs in [-9, 9].
pub const FLOAT_RESIDUAL_TOL: f64 = 1e-12;

/// The three 3x3 spin-1 generators and the three 2x2 Pauli generators.
#[derive(Clone, Debug)]
pub struct SpinMatrixSet<T> {
    pub sx: Matrix<T, 3>,
    pub sy: Matrix<T, 3>,
    pub sz: Matrix<T, 3>,
    pub pauli_x: Matrix<T, 2>,
    pub pauli_y: Matrix<T, 2>,
    pub pauli_z: Matrix<T, 2>,
}

/// Energy, momentum and mass of a free mode (natural units).
#[derive(Clone, Debug)]
pub struct ScalarTriple<T> {
    pub e: T,
    pub p: [T; 3],
    pub m: T,
}

/// Builds the generator set. Spin-1 entries are all in {0, +-i}; Pauli
/// entries in {0, +-1, +-i}; all six matrices are Hermitian.
pub fn spin1_matrices<T: ComplexScalar>() -> SpinMatrixSet<T> {
    let z = || T::zero();
    let one = || T::from_ints(1, 0);
    let mone = || T::from_ints(-1, 0);
    let i = || T::from_ints(0, 1);
    let mi = || T::from_ints(0, -1);

    SpinMatrixSet {
        sx: Matrix::from_rows([[z(), z(), z()], [z(), z(), mi()], [z(), i(), z()]]),
        sy: Matrix::from_rows([[z(), z(), i()], [z(), z(), z()], [mi(), z(), z()]]),
        sz: Matrix::from_rows([[z(), mi(), z()], [i(), z(), z()], [z(), z(), z()]]),
        pauli_x: Matrix::from_rows([[z(), one()], [one(), z()]]),
        pauli_y: Matrix::from_rows([[z(), mi()], [i(), z()]]),
        pauli_z: Matrix::from_rows([[one(), z()], [z(), mone()]]),
    }
}

/// a . S = a_x S_x + a_y S_y + a_z S_z.
pub fn dot_spin<T: ComplexScalar>(set: &SpinMatrixSet<T>, a: &[T; 3]) -> Matrix<T, 3> {
    set.sx
        .scale(&a[0])
        .add(&set.sy.scale(&a[1]))
        .add(&set.sz.scale(&a[2]))
}

/// a . sigma over the Pauli generators.
pub fn dot_pauli<T: ComplexScalar>(set: &SpinMatrixSet<T>, a: &[T; 3]) -> Matrix<T, 2> {
    set.pauli_x
        .scale(&a[0])
        .add(&set.pauli_y.scale(&a[1]))
        .add(&set.pauli_z.scale(&a[2]))
}

/// Residual of the curl identity in algebraic form: (a.S)v - i (a x v).
///
/// With a = -i grad this is what turns the operator product into the curl
/// of the field, so it must vanish for every complex pair.
pub fn verify_cross_identity<T: ComplexScalar>(
    set: &SpinMatrixSet<T>,
    a: &[T; 3],
    v: &[T; 3],
) -> [T; 3] {
    let lhs = dot_spin(set, a).mul_vec(v);
    let rhs = vec3_scale(&T::i(), &vec3_cross(a, v));
    vec3_sub(&lhs, &rhs)
}

/// [E I - p.S][E I + p.S] v - p (p.v), the massless product applied to v.
pub fn photon_product<T: ComplexScalar>(
    set: &SpinMatrixSet<T>,
    e: &T,
    p: &[T; 3],
    v: &[T; 3],
) -> [T; 3] {
    let ps = dot_spin(set, p);
    let plus = Matrix::scaled_identity(e).add(&ps);
    let minus = Matrix::scaled_identity(e).sub(&ps);
    let product = minus.mul_vec(&plus.mul_vec(v));
    let projector = vec3_scale(&vec3_dot(p, v), p);
    vec3_sub(&product, &projector)
}

/// Residual of the massless decomposition: the product above must equal
/// (E^2 - p^2) v for arbitrary E, p, v.
pub fn verify_photon_decomposition<T: ComplexScalar>(
    set: &SpinMatrixSet<T>,
    t: &ScalarTriple<T>,
    v: &[T; 3],
) -> [T; 3] {
    let lhs = photon_product(set, &t.e, &t.p, v);
    let scalar = t.e.clone() * t.e.clone() - vec3_dot(&t.p, &t.p);
    vec3_sub(&lhs, &vec3_scale(&scalar, v))
}

/// [E I - p.S][E I + p.S] v - p (p.v) - m^2 v, the massive product.
pub fn proca_product<T: ComplexScalar>(
    set: &SpinMatrixSet<T>,
    t: &ScalarTriple<T>,
    v: &[T; 3],
) -> [T; 3] {
    let m2 = t.m.clone() * t.m.clone();
    vec3_sub(&photon_product(set, &t.e, &t.p, v), &vec3_scale(&m2, v))
}

/// Residual of the massive decomposition against (E^2 - p^2 - m^2) v.
/// Holds off-shell: it is a polynomial identity in E, p, m, v.
pub fn verify_proca_decomposition<T: ComplexScalar>(
    set: &SpinMatrixSet<T>,
    t: &ScalarTriple<T>,
    v: &[T; 3],
) -> [T; 3] {
    let lhs = proca_product(set, t, v);
    let scalar = t.e.clone() * t.e.clone() - vec3_dot(&t.p, &t.p) - t.m.clone() * t.m.clone();
    vec3_sub(&lhs, &vec3_scale(&scalar, v))
}

/// The 4x4 block Hamiltonian [[m I, p.sigma], [p.sigma, -m I]].
pub fn dirac_hamiltonian<T: ComplexScalar>(
    set: &SpinMatrixSet<T>,
    t: &ScalarTriple<T>,
) -> Matrix<T, 4> {
    let ps = dot_pauli(set, &t.p);
    Matrix::from_fn(|r, c| match (r / 2, c / 2) {
        (0, 0) => {
            if r == c {
                t.m.clone()
            } else {
                T::zero()
            }
        }
        (1, 1) => {
            if r == c {
                -t.m.clone()
            } else {
                T::zero()
            }
        }
        _ => ps.get(r % 2, c % 2).clone(),
    })
}

/// (E I + H)(E I - H) applied symbolically; must equal (E^2 - p^2 - m^2) I.
pub fn dirac_product<T: ComplexScalar>(
    set: &SpinMatrixSet<T>,
    t: &ScalarTriple<T>,
) -> Matrix<T, 4> {
    let h = dirac_hamiltonian(set, t);
    let plus = Matrix::scaled_identity(&t.e).add(&h);
    let minus = Matrix::scaled_identity(&t.e).sub(&h);
    plus.mul(&minus)
}

/// Residual of the 4x4 electron decomposition.
pub fn verify_dirac_decomposition<T: ComplexScalar>(
    set: &SpinMatrixSet<T>,
    t: &ScalarTriple<T>,
) -> Matrix<T, 4> {
    let scalar = t.e.clone() * t.e.clone() - vec3_dot(&t.p, &t.p) - t.m.clone() * t.m.clone();
    dirac_product(set, t).sub(&Matrix::scaled_identity(&scalar))
}

/// Residual of the 2x2 massless decomposition
/// (E I - p.sigma)(E I + p.sigma) - (E^2 - p^2) I, i.e. (p.sigma)^2 = p^2 I.
pub fn verify_neutrino_decomposition<T: ComplexScalar>(
    set: &SpinMatrixSet<T>,
    e: &T,
    p: &[T; 3],
) -> Matrix<T, 2> {
    let ps = dot_pauli(set, p);
    let plus = Matrix::scaled_identity(e).add(&ps);
    let minus = Matrix::scaled_identity(e).sub(&ps);
    let scalar = e.clone() * e.clone() - vec3_dot(p, p);
    minus.mul(&plus).sub(&Matrix::scaled_identity(&scalar))
}

// ---------------------------------------------------------------------------
// Reporting and randomized trials
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithmeticMode {
    Exact,
    Float,
}

impl std::fmt::Display for ArithmeticMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ArithmeticMode::Exact => write!(f, "exact"),
            ArithmeticMode::Float => write!(f, "float"),
        }
    }
}

/// Outcome of one identity check (fixed or randomized).
#[derive(Clone, Debug, Serialize)]
pub struct IdentityResult {
    pub identity: String,
    pub mode: ArithmeticMode,
    pub trials: usize,
    pub max_residual: f64,
    pub exactly_zero: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraReport {
    pub seed: u64,
    pub trials: usize,
    pub results: Vec<IdentityResult>,
    pub all_passed: bool,
}

/// Verifies the commutation relations, S^2 = 2 I, and Hermiticity of all
/// six generators. In exact mode every residual is literally zero.
pub fn check_spin_algebra<T: ComplexScalar>(
    set: &SpinMatrixSet<T>,
    mode: ArithmeticMode,
) -> Vec<IdentityResult> {
    let i = T::i();
    let two = T::from_ints(2, 0);
    let s2 = set
        .sx
        .mul(&set.sx)
        .add(&set.sy.mul(&set.sy))
        .add(&set.sz.mul(&set.sz));

    let residuals: Vec<(String, Matrix<T, 3>)> = vec![
        (
            "[S_x,S_y] = i S_z".into(),
            Matrix::commutator(&set.sx, &set.sy).sub(&set.sz.scale(&i)),
        ),
        (
            "[S_z,S_x] = i S_y".into(),
            Matrix::commutator(&set.sz, &set.sx).sub(&set.sy.scale(&i)),
        ),
        (
            "[S_y,S_z] = i S_x".into(),
            Matrix::commutator(&set.sy, &set.sz).sub(&set.sx.scale(&i)),
        ),
        ("S^2 = 2 I".into(), s2.sub(&Matrix::scaled_identity(&two))),
    ];

    let mut out: Vec<IdentityResult> = residuals
        .into_iter()
        .map(|(identity, r)| {
            let exactly_zero = r.is_zero();
            let max_residual = r.max_magnitude();
            IdentityResult {
                identity,
                mode,
                trials: 1,
                max_residual,
                exactly_zero,
                pass: pass_criterion(mode, exactly_zero, max_residual),
            }
        })
        .collect();

    let hermitian = set.sx.is_hermitian()
        && set.sy.is_hermitian()
        && set.sz.is_hermitian()
        && set.pauli_x.is_hermitian()
        && set.pauli_y.is_hermitian()
        && set.pauli_z.is_hermitian();
    out.push(IdentityResult {
        identity: "all generators Hermitian".into(),
        mode,
        trials: 1,
        max_residual: if hermitian { 0.0 } else { f64::INFINITY },
        exactly_zero: hermitian,
        pass: hermitian,
    });
    out
}

fn pass_criterion(mode: ArithmeticMode, exactly_zero: bool, max_residual: f64) -> bool {
    match mode {
        ArithmeticMode::Exact => exactly_zero,
        ArithmeticMode::Float => max_residual < FLOAT_RESIDUAL_TOL,
    }
}

fn draw_complex<T: ComplexScalar>(rng: &mut ChaCha8Rng) -> T {
    let re = rng.random_range(-9..=9i64);
    let im = rng.random_range(-9..=9i64);
    T::from_ints(re, im)
}

fn draw_real<T: ComplexScalar>(rng: &mut ChaCha8Rng) -> T {
    T::from_ints(rng.random_range(-9..=9i64), 0)
}

fn draw_vec3<T: ComplexScalar>(rng: &mut ChaCha8Rng) -> [T; 3] {
    std::array::from_fn(|_| draw_complex(rng))
}

fn draw_triple<T: ComplexScalar>(rng: &mut ChaCha8Rng) -> ScalarTriple<T> {
    ScalarTriple {
        e: draw_real(rng),
        p: std::array::from_fn(|_| draw_real(rng)),
        m: draw_real(rng),
    }
}

/// Runs the fixed identities once and each parameterized identity over
/// `trials` seeded random draws with integer components in [-9, 9].
///
/// The same seed produces the same integer stream in both modes, so exact
/// and float runs exercise identical inputs.
pub fn run_identity_trials<T: ComplexScalar>(
    set: &SpinMatrixSet<T>,
    mode: ArithmeticMode,
    trials: usize,
    seed: u64,
) -> Vec<IdentityResult> {
    let mut results = check_spin_algebra(set, mode);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = [
        "(a.S)v = i (a x v)",
        "photon decomposition product = (E^2 - p^2) I",
        "Proca decomposition product = (E^2 - p^2 - m^2) I",
        "Dirac decomposition product = (E^2 - p^2 - m^2) I",
        "neutrino decomposition product = (E^2 - p^2) I",
    ];
    let mut max_res = [0.0f64; 5];
    let mut all_zero = [true; 5];

    for _ in 0..trials {
        let a: [T; 3] = draw_vec3(&mut rng);
        let v: [T; 3] = draw_vec3(&mut rng);
        let t: ScalarTriple<T> = draw_triple(&mut rng);

        let r_cross = verify_cross_identity(set, &a, &v);
        let r_photon = verify_photon_decomposition(set, &t, &v);
        let r_proca = verify_proca_decomposition(set, &t, &v);
        let r_dirac = verify_dirac_decomposition(set, &t);
        let r_neutrino = verify_neutrino_decomposition(set, &t.e, &t.p);

        let mags = [
            vec3_max_magnitude(&r_cross),
            vec3_max_magnitude(&r_photon),
            vec3_max_magnitude(&r_proca),
            r_dirac.max_magnitude(),
            r_neutrino.max_magnitude(),
        ];
        let zeros = [
            vec3_is_zero(&r_cross),
            vec3_is_zero(&r_photon),
            vec3_is_zero(&r_proca),
            r_dirac.is_zero(),
            r_neutrino.is_zero(),
        ];
        for j in 0..5 {
            max_res[j] = max_res[j].max(mags[j]);
            all_zero[j] &= zeros[j];
        }
    }

    for j in 0..5 {
        results.push(IdentityResult {
            identity: names[j].into(),
            mode,
            trials,
            max_residual: max_res[j],
            exactly_zero: all_zero[j],
            pass: pass_criterion(mode, all_zero[j], max_res[j]),
        });
    }
    results
}

/// Full verification sweep: exact mode plus float mode, identical inputs.
///
/// `tamper_spin_sign` flips one S_z entry first; it exists so the test
/// suite can prove a broken generator is actually caught.
pub fn verify_all(trials: usize, seed: u64, tamper_spin_sign: bool) -> AlgebraReport {
    let mut exact_set: SpinMatrixSet<ExactComplex> = spin1_matrices();
    let mut float_set: SpinMatrixSet<num_complex::Complex64> = spin1_matrices();
    if tamper_spin_sign {
        let sz = exact_set.sz.clone();
        exact_set.sz = Matrix::from_fn(|r, c| {
            if (r, c) == (0, 1) {
                -sz.get(r, c).clone()
            } else {
                sz.get(r, c).clone()
            }
        });
        let sz = float_set.sz.clone();
        float_set.sz = Matrix::from_fn(|r, c| {
            if (r, c) == (0, 1) {
                -*sz.get(r, c)
            } else {
                *sz.get(r, c)
            }
        });
    }

    let mut results = run_identity_trials(&exact_set, ArithmeticMode::Exact, trials, seed);
    results.extend(run_identity_trials(
        &float_set,
        ArithmeticMode::Float,
        trials,
        seed,
    ));
    let all_passed = results.iter().all(|r| r.pass);
    AlgebraReport {
        seed,
        trials,
        results,
        all_passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use num_traits::Zero;

    fn c(re: i64, im: i64) -> ExactComplex {
        ExactComplex::from_ints(re, im)
    }

    fn exact_set() -> SpinMatrixSet<ExactComplex> {
        spin1_matrices()
    }

    #[test]
    fn spin_z_entries_match_definition() {
        let set = exact_set();
        assert_eq!(*set.sz.get(0, 1), c(0, -1));
        assert_eq!(*set.sz.get(1, 0), c(0, 1));
        for (r, col) in [
            (0usize, 0usize),
            (0, 2),
            (1, 1),
            (1, 2),
            (2, 0),
            (2, 1),
            (2, 2),
        ] {
            assert!(set.sz.get(r, col).is_zero(), "S_z[{r}][{col}] should be 0");
        }
    }

    #[test]
    fn all_generators_hermitian() {
        let set = exact_set();
        assert!(set.sx.is_hermitian());
        assert!(set.sy.is_hermitian());
        assert!(set.sz.is_hermitian());
        assert!(set.pauli_x.is_hermitian());
        assert!(set.pauli_y.is_hermitian());
        assert!(set.pauli_z.is_hermitian());
    }

    #[test]
    fn pauli_xy_product_is_i_pauli_z() {
        let set = exact_set();
        // sigma_x sigma_y written out by hand: [[i, 0], [0, -i]].
        let expected = Matrix::from_rows([[c(0, 1), c(0, 0)], [c(0, 0), c(0, -1)]]);
        assert_eq!(set.pauli_x.mul(&set.pauli_y), expected);
        assert_eq!(set.pauli_z.scale(&c(0, 1)), expected);
    }

    #[test]
    fn spin_algebra_exactly_zero() {
        let checks = check_spin_algebra(&exact_set(), ArithmeticMode::Exact);
        for r in &checks {
            assert!(r.exactly_zero, "{} not exactly zero", r.identity);
            assert_eq!(r.max_residual, 0.0);
        }
    }

    #[test]
    fn commutator_sy_sz_is_i_sx() {
        let set = exact_set();
        let r = Matrix::commutator(&set.sy, &set.sz).sub(&set.sx.scale(&c(0, 1)));
        assert!(r.is_zero());
    }

    #[test]
    fn dot_spin_selects_basis() {
        let set = exact_set();
        let zero = dot_spin(&set, &[c(0, 0), c(0, 0), c(0, 0)]);
        assert!(zero.is_zero());
        let sz = dot_spin(&set, &[c(0, 0), c(0, 0), c(1, 0)]);
        assert_eq!(sz, set.sz);
        // (S_x + S_y) row 0, col 2 comes from S_y alone.
        let sum = dot_spin(&set, &[c(1, 0), c(1, 0), c(0, 0)]);
        assert_eq!(*sum.get(0, 2), c(0, 1));
    }

    #[test]
    fn cross_identity_unit_vectors() {
        let set = exact_set();
        let a = [c(1, 0), c(0, 0), c(0, 0)];
        let v = [c(0, 0), c(1, 0), c(0, 0)];
        let lhs = dot_spin(&set, &a).mul_vec(&v);
        assert_eq!(lhs, [c(0, 0), c(0, 0), c(0, 1)]);
        assert!(vec3_is_zero(&verify_cross_identity(&set, &a, &v)));
    }

    #[test]
    fn cross_identity_parallel_vector_maps_to_zero() {
        let set = exact_set();
        let a = [c(3, -2), c(0, 4), c(-1, 1)];
        let applied = dot_spin(&set, &a).mul_vec(&a);
        assert!(vec3_is_zero(&applied));
    }

    #[test]
    fn photon_decomposition_example() {
        let set = exact_set();
        let t = ScalarTriple {
            e: c(1, 0),
            p: [c(1, 0), c(0, 0), c(0, 0)],
            m: c(0, 0),
        };
        let v = [c(0, 0), c(1, 0), c(0, 0)];
        assert!(vec3_is_zero(&verify_photon_decomposition(&set, &t, &v)));
    }

    #[test]
    fn photon_product_at_zero_momentum_is_e_squared() {
        let set = exact_set();
        let e = c(3, 0);
        let p = [c(0, 0), c(0, 0), c(0, 0)];
        let v = [c(2, 1), c(-1, 0), c(0, 5)];
        let lhs = photon_product(&set, &e, &p, &v);
        let expected = vec3_scale(&(e.clone() * e), &v);
        assert_eq!(lhs, expected);
    }

    #[test]
    fn proca_product_vanishes_on_shell() {
        // E = 5, |p| = 3, m = 4: 25 - 9 - 16 = 0, so the product kills any v.
        let set = exact_set();
        let t = ScalarTriple {
            e: c(5, 0),
            p: [c(3, 0), c(0, 0), c(0, 0)],
            m: c(4, 0),
        };
        let v = [c(7, -2), c(1, 1), c(-4, 3)];
        assert!(vec3_is_zero(&proca_product(&set, &t, &v)));
    }

    #[test]
    fn proca_reduces_to_photon_at_zero_mass() {
        let set = exact_set();
        let t = ScalarTriple {
            e: c(2, 0),
            p: [c(1, 0), c(-3, 0), c(2, 0)],
            m: c(0, 0),
        };
        let v = [c(1, 2), c(3, -1), c(0, 4)];
        assert_eq!(
            verify_proca_decomposition(&set, &t, &v),
            verify_photon_decomposition(&set, &t, &v)
        );
    }

    #[test]
    fn dirac_product_on_shell_is_zero_matrix() {
        // E = 2, p = (1,1,1), m = 1: 4 - 3 - 1 = 0.
        let set = exact_set();
        let t = ScalarTriple {
            e: c(2, 0),
            p: [c(1, 0), c(1, 0), c(1, 0)],
            m: c(1, 0),
        };
        assert!(dirac_product(&set, &t).is_zero());
    }

    #[test]
    fn dirac_product_at_rest_is_diagonal() {
        let set = exact_set();
        let t = ScalarTriple {
            e: c(3, 0),
            p: [c(0, 0), c(0, 0), c(0, 0)],
            m: c(2, 0),
        };
        let expected = Matrix::scaled_identity(&c(5, 0)); // E^2 - m^2 = 9 - 4
        assert_eq!(dirac_product(&set, &t), expected);
    }

    #[test]
    fn neutrino_decomposition_examples() {
        let set = exact_set();
        let r = verify_neutrino_decomposition(&set, &c(1, 0), &[c(1, 0), c(0, 0), c(0, 0)]);
        assert!(r.is_zero());
        let r0 = verify_neutrino_decomposition(&set, &c(4, 0), &[c(0, 0), c(0, 0), c(0, 0)]);
        assert!(r0.is_zero());
    }

    #[test]
    fn random_trials_exact_mode_all_zero() {
        let set = exact_set();
        let results = run_identity_trials(&set, ArithmeticMode::Exact, 100, 1);
        for r in &results {
            assert!(
                r.exactly_zero,
                "{} had residual {}",
                r.identity, r.max_residual
            );
            assert!(r.pass);
        }
    }

    #[test]
    fn random_trials_float_mode_below_tolerance() {
        let set: SpinMatrixSet<Complex64> = spin1_matrices();
        let results = run_identity_trials(&set, ArithmeticMode::Float, 100, 1);
        for r in &results {
            assert!(
                r.max_residual < FLOAT_RESIDUAL_TOL,
                "{} residual {}",
                r.identity,
                r.max_residual
            );
        }
    }

    #[test]
    fn tampered_generator_is_caught() {
        let report = verify_all(10, 1, true);
        assert!(!report.all_passed);
        let untouched = verify_all(10, 1, false);
        assert!(untouched.all_passed);
    }

    #[test]
    fn same_seed_gives_identical_reports() {
        let a = verify_all(25, 42, false);
        let b = verify_all(25, 42, false);
        let ja = serde_json::to_string(&a).unwrap();
        let jb = serde_json::to_string(&b).unwrap();
        assert_eq!(ja, jb);
    }
}
