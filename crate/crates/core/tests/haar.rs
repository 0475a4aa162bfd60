use glass2fock::scf::haar_random_density;

const M: usize = 12;
const N: usize = 6;
const SAMPLES: u64 = 10_000;

/// Sample mean and its standard error.
struct Moment {
    sum: f64,
    sum_sq: f64,
}

impl Moment {
    fn push(&mut self, x: f64) {
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn z(&self, expected: f64) -> f64 {
        let count = SAMPLES as f64;
        let mean = self.sum / count;
        let var = (self.sum_sq / count - mean * mean).max(0.0);
        let se = (var / (count - 1.0)).sqrt().max(f64::EPSILON);
        (mean - expected) / se
    }
}

fn moment() -> Moment {
    Moment {
        sum: 0.0,
        sum_sq: 0.0,
    }
}

/// Haar column covariance makes `E[P] = (N/M)·I`. Each independent real
/// component (upper triangle, real and imaginary parts) is tested at 3
/// standard errors; with 144 components about 0.4 chance exceedances are
/// expected, so up to 3 are tolerated (Poisson tail below 1e−3).
#[test]
fn mean_density_is_scaled_identity() {
    let mut re: Vec<Moment> = (0..M * M).map(|_| moment()).collect();
    let mut im: Vec<Moment> = (0..M * M).map(|_| moment()).collect();
    for seed in 0..SAMPLES {
        let p = haar_random_density(M, N, seed).unwrap();
        for i in 0..M {
            for j in i..M {
                let z = p.matrix()[(i, j)];
                re[i * M + j].push(z.re);
                im[i * M + j].push(z.im);
            }
        }
    }
    let mut exceed = Vec::new();
    for i in 0..M {
        for j in i..M {
            let target = if i == j { N as f64 / M as f64 } else { 0.0 };
            let zr = re[i * M + j].z(target);
            if zr.abs() > 3.0 {
                exceed.push((i, j, "re", zr));
            }
            if i != j {
                let zi = im[i * M + j].z(0.0);
                if zi.abs() > 3.0 {
                    exceed.push((i, j, "im", zi));
                }
            }
            // diagonal entries are the most directly tied to the filling
            if i == j {
                assert!(zr.abs() <= 3.0, "diagonal ({i},{i}) z = {zr}");
            }
        }
    }
    assert!(exceed.len() <= 3, "3σ exceedances: {exceed:?}");
}

/// `P_ii ~ Beta(N, M−N)` and `E|P_ij|² = N(M−N) / (M(M²−1))` for `i ≠ j`.
#[test]
fn second_moments_match_haar_values() {
    let mut diag = moment();
    let mut off = moment();
    for seed in 0..SAMPLES {
        let p = haar_random_density(M, N, seed).unwrap();
        diag.push(p.matrix()[(0, 0)].re.powi(2));
        off.push(p.matrix()[(0, 1)].norm_sqr());
    }
    let (m, n) = (M as f64, N as f64);
    let z_diag = diag.z(n * (n + 1.0) / (m * (m + 1.0)));
    let z_off = off.z(n * (m - n) / (m * (m * m - 1.0)));
    assert!(z_diag.abs() <= 3.0, "z = {z_diag}");
    assert!(z_off.abs() <= 3.0, "z = {z_off}");
}

#[test]
fn seeds_are_reproducible_and_distinct() {
    let a = haar_random_density(5, 2, 11).unwrap();
    assert_eq!(a, haar_random_density(5, 2, 11).unwrap());
    assert_ne!(a, haar_random_density(5, 2, 12).unwrap());
}
