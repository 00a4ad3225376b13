//! Adaptive Gauss–Kronrod (7, 15) quadrature.

use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights at the odd Kronrod nodes 1, 3, 5, 7.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 2000;

fn gk15(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        k += s * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

struct Piece {
    a: f64,
    b: f64,
    val: Complex64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Global adaptive subdivision: the piece with the largest error estimate is
/// bisected until the total estimate drops below `tol` or the interval
/// budget runs out.
fn adapt(f: &impl Fn(f64) -> Complex64, pts: &[f64], tol: f64) -> Complex64 {
    let mut heap = std::collections::BinaryHeap::new();
    let mut total_err = 0.0;
    for w in pts.windows(2) {
        let (val, err) = gk15(f, w[0], w[1]);
        total_err += err;
        heap.push(Piece { a: w[0], b: w[1], val, err });
    }
    while total_err > tol && heap.len() < MAX_INTERVALS {
        let worst = heap.pop().expect("nonempty");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // Too narrow to split; keep it and stop refining.
            heap.push(worst);
            break;
        }
        let (lv, le) = gk15(f, worst.a, m);
        let (rv, re) = gk15(f, m, worst.b);
        total_err += le + re - worst.err;
        heap.push(Piece { a: worst.a, b: m, val: lv, err: le });
        heap.push(Piece { a: m, b: worst.b, val: rv, err: re });
    }
    heap.iter().map(|p| p.val).sum()
}

/// `∫_a^b f` to absolute tolerance `tol`, splitting first at each interior
/// breakpoint.
pub fn integrate_complex(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: f64,
) -> Complex64 {
    let mut pts = vec![a];
    pts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    adapt(&f, &pts, tol)
}

pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], tol: f64) -> f64 {
    integrate_complex(|x| Complex64::new(f(x), 0.0), a, b, breaks, tol).re
}
