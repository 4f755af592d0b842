//! Regenerates the bundled fixture datasets under `fixtures/`.
//!
//! The files are committed; rerunning this produces byte-identical output:
//!
//! ```text
//! cargo run -p exirt-cli --example gen_fixtures -- fixtures
//! ```
//!
//! Three families of fixtures:
//! - `planted_noise.csv`: three mutually redundant, perfectly separating
//!   attributes plus one pure-noise column. Any pair of split candidates
//!   contains a perfect attribute, so a forest never needs the noise column.
//! - `easy_*.csv`: small, balanced, mixed-type datasets with a clean signal
//!   hierarchy (strong > medium > weak > none). Explanation measures agree.
//! - `hard_*.csv`: wide, imbalanced, label-sorted numeric datasets whose
//!   attributes are noisy correlated copies of a weak signal. Measures
//!   disagree.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random_range(1e-12..1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn write_csv(dir: &Path, name: &str, header: &str, rows: &[String]) {
    let mut content = String::new();
    writeln!(content, "{header}").unwrap();
    for row in rows {
        writeln!(content, "{row}").unwrap();
    }
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    println!("wrote {}", path.display());
}

fn planted_noise(dir: &Path) {
    let mut rng = ChaCha8Rng::seed_from_u64(7001);
    let mut rows = Vec::new();
    for i in 0..240 {
        let y = i % 2;
        let t: f64 = if y == 1 {
            rng.random_range(0.5..2.0)
        } else {
            rng.random_range(-2.0..-0.5)
        };
        let z: f64 = rng.random_range(-1.0..1.0);
        rows.push(format!(
            "{:.4},{:.4},{:.4},{:.4},{y}",
            t,
            2.0 * t + 1.0,
            -t,
            z
        ));
    }
    write_csv(dir, "planted_noise.csv", "a_one,b_two,c_three,z_noise,label", &rows);
}

const CATEGORIES: [&str; 4] = ["blue", "gold", "green", "red"];

fn easy(dir: &Path, name: &str, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for _ in 0..200 {
        let y: u8 = rng.random_range(0..2);
        let sign = if y == 1 { 1.0 } else { -1.0 };
        let x_strong = 1.2 * sign + 0.5 * normal(&mut rng);
        let x_medium = 0.6 * sign + 0.7 * normal(&mut rng);
        let p_flag = if y == 1 { 0.75 } else { 0.25 };
        let b_flag = (rng.random_range(0.0..1.0) < p_flag) as u8;
        let weights: [f64; 4] = if y == 1 {
            [0.4, 0.3, 0.2, 0.1]
        } else {
            [0.1, 0.2, 0.3, 0.4]
        };
        let draw: f64 = rng.random_range(0.0..1.0);
        let mut acc = 0.0;
        let mut cat = CATEGORIES[3];
        for (k, w) in weights.iter().enumerate() {
            acc += w;
            if draw < acc {
                cat = CATEGORIES[k];
                break;
            }
        }
        rows.push(format!("{x_strong:.4},{x_medium:.4},{b_flag},{cat},{y}"));
    }
    write_csv(
        dir,
        name,
        "x_strong,x_medium,b_flag,s_cat,label",
        &rows,
    );
}

fn hard(dir: &Path, name: &str, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 400;
    let n_features = 16;
    let mut rows = Vec::new();
    for i in 0..n {
        // label-sorted rows: first 75% class 0, rest class 1
        let y = (i >= 3 * n / 4) as u8;
        let sign = if y == 1 { 1.0 } else { -1.0 };
        let common = normal(&mut rng);
        let mut cells = Vec::with_capacity(n_features + 1);
        for j in 0..n_features {
            let weight = 0.5 + 0.5 * j as f64 / (n_features - 1) as f64;
            let value = 0.35 * weight * sign + 0.75 * common + 0.66 * normal(&mut rng);
            cells.push(format!("{value:.4}"));
        }
        cells.push(y.to_string());
        rows.push(cells.join(","));
    }
    let header: Vec<String> = (0..n_features)
        .map(|j| format!("v{j:02}"))
        .chain(std::iter::once("label".to_string()))
        .collect();
    write_csv(dir, name, &header.join(","), &rows);
}

fn main() {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("fixtures"));
    std::fs::create_dir_all(&dir).unwrap();
    planted_noise(&dir);
    easy(&dir, "easy_margin.csv", 101);
    easy(&dir, "easy_bands.csv", 102);
    easy(&dir, "easy_gates.csv", 103);
    hard(&dir, "hard_wide_a.csv", 201);
    hard(&dir, "hard_wide_b.csv", 202);
    hard(&dir, "hard_wide_c.csv", 203);
}
