use num_complex::Complex64;
use polytorus::bohr::{lift_dirichlet, unlift};
use polytorus::extension::{radial_section, twist};
use polytorus::{DirichletSeries, FourierSeries, MultiIndex, PolydiscPoint, RadialScheme, TorusPoint};
use proptest::prelude::*;

const PRIMES: [f64; 8] = [2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0];

fn coeff() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

/// Dirichlet polynomials over integers with prime factors among the first
/// eight primes, each exponent below `max_exp`.
fn dirichlet_with(max_exp: u32) -> impl Strategy<Value = DirichletSeries> {
    prop::collection::vec((prop::collection::vec(0..max_exp, 8), coeff()), 1..12).prop_map(|terms| {
        let terms = terms.into_iter().map(|(exps, a)| {
            let n = exps.iter().zip(PRIMES).map(|(&e, p)| (p as u64).pow(e)).product::<u64>();
            (n, a)
        });
        DirichletSeries::from_terms(terms.collect::<Vec<_>>()).unwrap()
    })
}

fn dirichlet() -> impl Strategy<Value = DirichletSeries> {
    dirichlet_with(3)
}

fn series(dim: u32) -> impl Strategy<Value = FourierSeries> {
    prop::collection::vec((prop::collection::vec(-2i32..3, dim as usize), coeff()), 1..10).prop_map(|terms| {
        FourierSeries::from_terms(terms.into_iter().map(|(exps, a)| {
            let entries = exps.iter().enumerate().map(|(j, &e)| (j as u32 + 1, e)).collect::<Vec<_>>();
            (MultiIndex::new(entries).unwrap(), a)
        }))
    })
}

fn close(a: &FourierSeries, b: &FourierSeries, tol: f64) -> bool {
    a.add(&b.scale(Complex64::new(-1.0, 0.0))).wiener_norm() <= tol
}

proptest! {
    #[test]
    fn lift_preserves_values_on_the_prime_point(d in dirichlet(), sigma in 1.0..3.0f64) {
        let f = lift_dirichlet(&d).unwrap();
        let radii: Vec<f64> = PRIMES.iter().map(|p| p.powf(-sigma)).collect();
        let z = PolydiscPoint::from_polar(&radii, &[0.0; 8]).unwrap();
        let direct = d.eval(Complex64::new(sigma, 0.0), d.max_support()).unwrap();
        prop_assert!((f.evaluate(&z) - direct).norm() <= 1e-12 * (1.0 + direct.norm()));
        prop_assert_eq!(unlift(&f).unwrap(), d);
    }

    #[test]
    fn lift_turns_convolution_into_products(a in dirichlet_with(2), b in dirichlet_with(2)) {
        let lhs = lift_dirichlet(&a.convolve(&b).unwrap()).unwrap();
        let rhs = lift_dirichlet(&a).unwrap().mul(&lift_dirichlet(&b).unwrap()).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn text_round_trip_is_exact(f in series(4)) {
        prop_assert_eq!(FourierSeries::from_text(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn twists_compose_multiplicatively(
        f in series(3),
        (r1, t1, r2, t2) in (0.0..1.0f64, -3.0..3.0f64, 0.0..1.0f64, -3.0..3.0f64),
        alpha in 0.5..2.0f64,
    ) {
        let scheme = RadialScheme::Power { alpha };
        let (xi, eta) = (Complex64::from_polar(r1, t1), Complex64::from_polar(r2, t2));
        let twice = twist(&twist(&f, xi, &scheme).unwrap(), eta, &scheme).unwrap();
        let once = twist(&f, xi * eta, &scheme).unwrap();
        prop_assert!(close(&twice, &once, 1e-12));
        prop_assert!(once.wiener_norm() <= f.wiener_norm() * (1.0 + 1e-15));
    }

    #[test]
    fn radial_section_is_evaluation_at_scaled_radii(f in series(3), r in 0.0..1.0f64, theta in prop::collection::vec(0.0..6.3f64, 3)) {
        let scheme = RadialScheme::Explicit { table: vec![2, 1, 3] };
        let value = radial_section(&f, r, &TorusPoint::new(theta.clone()), &scheme).unwrap();
        let radii: Vec<f64> = [2, 1, 3].iter().map(|&m| r.powi(m)).collect();
        let direct = f.evaluate(&PolydiscPoint::from_polar(&radii, &theta).unwrap());
        prop_assert!((value - direct).norm() <= 1e-12 * (1.0 + f.wiener_norm()));
    }
}
