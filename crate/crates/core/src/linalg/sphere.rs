//! Point sets and local search on the unit sphere.

use std::f64::consts::PI;

pub fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Orthonormal pair spanning the tangent plane at the unit vector `p`.
pub fn tangent_basis(p: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let a = if p[2].abs() < 0.9 { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
    let dot = a[0] * p[0] + a[1] * p[1] + a[2] * p[2];
    let e1 = normalize([a[0] - dot * p[0], a[1] - dot * p[1], a[2] - dot * p[2]]);
    (e1, cross(p, e1))
}

/// Point reached from `p` after arc length `t` along the tangent `e`.
pub fn geodesic(p: [f64; 3], e: [f64; 3], t: f64) -> [f64; 3] {
    let (s, c) = t.sin_cos();
    normalize([c * p[0] + s * e[0], c * p[1] + s * e[1], c * p[2] + s * e[2]])
}

/// `count` nearly uniform unit vectors on a golden-angle spiral.
pub fn fibonacci_sphere(count: usize) -> Vec<[f64; 3]> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let (s, c) = (golden * i as f64).sin_cos();
            [r * c, r * s, z]
        })
        .collect()
}

/// Local minimization by alternating 3-point parabolic steps along two
/// tangent geodesics, halving the step when no long move is made.
pub fn minimize_on_sphere(f: &dyn Fn([f64; 3]) -> f64, start: [f64; 3], initial_step: f64) -> ([f64; 3], f64) {
    let mut p = start;
    let mut fp = f(p);
    let mut h = initial_step;
    let mut guard = 0;
    while h > 1e-9 && guard < 10_000 {
        guard += 1;
        let mut moved_far = false;
        let (e1, e2) = tangent_basis(p);
        for e in [e1, e2] {
            let (pm, pq) = (geodesic(p, e, -h), geodesic(p, e, h));
            let (fm, fq) = (f(pm), f(pq));
            let curv = fm - 2.0 * fp + fq;
            let t = if curv > 0.0 {
                (0.5 * h * (fm - fq) / curv).clamp(-h, h)
            } else if fm < fq {
                -h
            } else {
                h
            };
            let pc = geodesic(p, e, t);
            let fc = f(pc);
            let (best_t, best_p, best_f) = [(t, pc, fc), (-h, pm, fm), (h, pq, fq)]
                .into_iter()
                .min_by(|a, b| a.2.total_cmp(&b.2))
                .expect("non-empty");
            if best_f < fp {
                p = best_p;
                fp = best_f;
                if best_t.abs() > 0.5 * h {
                    moved_far = true;
                }
            }
        }
        if !moved_far {
            h *= 0.5;
        }
    }
    (p, fp)
}
