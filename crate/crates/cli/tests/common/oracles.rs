//! Brute-force reference evaluations of the 28 dissimilarity formulas,
//! written as direct index-loop transcriptions of their textbook
//! definitions — deliberately sharing no code with the library kernels.
//! Valid on the inputs the acceptance suite feeds them: raw vectors for
//! Hamming, non-negative counts for Cosine, strictly positive
//! distributions for the rest (no zero-handling conventions needed).

use tegad_core::MetricId;

pub fn oracle(metric: MetricId, p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len());
    match metric {
        MetricId::Hamming => hamming(p, q),
        MetricId::Cosine => cosine(p, q),
        MetricId::Jaccard => jaccard(p, q),
        MetricId::Dice => dice(p, q),
        MetricId::Kl => kl(p, q),
        MetricId::Jeffreys => jeffreys(p, q),
        MetricId::Js => js(p, q),
        MetricId::Euclidean => minkowski_p(p, q, 2.0),
        MetricId::Cityblock => minkowski_p(p, q, 1.0),
        MetricId::Chebyshev => chebyshev(p, q),
        MetricId::Minkowski => minkowski_p(p, q, 3.0),
        MetricId::Braycurtis => braycurtis(p, q),
        MetricId::Gower => gower(p, q),
        MetricId::Soergel => soergel(p, q),
        MetricId::Kulczynski => kulczynski(p, q),
        MetricId::Canberra => canberra(p, q),
        MetricId::Lorentzian => lorentzian(p, q),
        MetricId::Bhattacharyya => bhattacharyya(p, q),
        MetricId::Hellinger => hellinger(p, q),
        MetricId::Matusita => matusita(p, q),
        MetricId::Squaredchord => squaredchord(p, q),
        MetricId::Pearson => pearson(p, q),
        MetricId::Neyman => neyman(p, q),
        MetricId::Squared => squared(p, q),
        MetricId::Probsymmetric => 2.0 * squared(p, q),
        MetricId::Divergence => divergence(p, q),
        MetricId::Clark => clark(p, q),
        MetricId::Additivesymmetric => additivesymmetric(p, q),
    }
}

fn hamming(p: &[f64], q: &[f64]) -> f64 {
    let mut agreements = 0usize;
    for i in 0..p.len() {
        let both_present = p[i] > 0.0 && q[i] > 0.0;
        let both_absent = p[i] == 0.0 && q[i] == 0.0;
        if both_present || both_absent {
            agreements += 1;
        }
    }
    1.0 - agreements as f64 / p.len() as f64
}

fn cosine(p: &[f64], q: &[f64]) -> f64 {
    let mut dot = 0.0;
    let mut pp = 0.0;
    let mut qq = 0.0;
    for i in 0..p.len() {
        dot += p[i] * q[i];
        pp += p[i] * p[i];
        qq += q[i] * q[i];
    }
    1.0 - dot / (pp.sqrt() * qq.sqrt())
}

fn jaccard(p: &[f64], q: &[f64]) -> f64 {
    let mut num = 0.0;
    let mut pp = 0.0;
    let mut qq = 0.0;
    let mut pq = 0.0;
    for i in 0..p.len() {
        num += (p[i] - q[i]) * (p[i] - q[i]);
        pp += p[i] * p[i];
        qq += q[i] * q[i];
        pq += p[i] * q[i];
    }
    num / (pp + qq - pq)
}

fn dice(p: &[f64], q: &[f64]) -> f64 {
    let mut num = 0.0;
    let mut pp = 0.0;
    let mut qq = 0.0;
    for i in 0..p.len() {
        num += (p[i] - q[i]) * (p[i] - q[i]);
        pp += p[i] * p[i];
        qq += q[i] * q[i];
    }
    num / (pp + qq)
}

fn kl(p: &[f64], q: &[f64]) -> f64 {
    let mut sum = 0.0;
    for i in 0..p.len() {
        sum += p[i] * (p[i] / q[i]).log2();
    }
    sum
}

fn jeffreys(p: &[f64], q: &[f64]) -> f64 {
    let mut sum = 0.0;
    for i in 0..p.len() {
        sum += (p[i] - q[i]) * (p[i] / q[i]).ln();
    }
    sum
}

fn js(p: &[f64], q: &[f64]) -> f64 {
    let m: Vec<f64> = (0..p.len()).map(|i| (p[i] + q[i]) / 2.0).collect();
    ((kl(p, &m) + kl(q, &m)) / 2.0).sqrt()
}

fn minkowski_p(p: &[f64], q: &[f64], power: f64) -> f64 {
    let mut sum = 0.0;
    for i in 0..p.len() {
        sum += (p[i] - q[i]).abs().powf(power);
    }
    sum.powf(1.0 / power)
}

fn chebyshev(p: &[f64], q: &[f64]) -> f64 {
    let mut best = 0.0f64;
    for i in 0..p.len() {
        best = best.max((p[i] - q[i]).abs());
    }
    best
}

fn braycurtis(p: &[f64], q: &[f64]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..p.len() {
        num += (p[i] - q[i]).abs();
        den += p[i] + q[i];
    }
    num / den
}

fn gower(p: &[f64], q: &[f64]) -> f64 {
    let mut sum = 0.0;
    for i in 0..p.len() {
        sum += (p[i] - q[i]).abs();
    }
    sum / p.len() as f64
}

fn soergel(p: &[f64], q: &[f64]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..p.len() {
        num += (p[i] - q[i]).abs();
        den += p[i].max(q[i]);
    }
    num / den
}

fn kulczynski(p: &[f64], q: &[f64]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..p.len() {
        num += (p[i] - q[i]).abs();
        den += p[i].min(q[i]);
    }
    num / den
}

fn canberra(p: &[f64], q: &[f64]) -> f64 {
    let mut sum = 0.0;
    for i in 0..p.len() {
        sum += (p[i] - q[i]).abs() / (p[i] + q[i]);
    }
    sum
}

fn lorentzian(p: &[f64], q: &[f64]) -> f64 {
    let mut sum = 0.0;
    for i in 0..p.len() {
        sum += (1.0 + (p[i] - q[i]).abs()).ln();
    }
    sum
}

fn fidelity(p: &[f64], q: &[f64]) -> f64 {
    let mut sum = 0.0;
    for i in 0..p.len() {
        sum += (p[i] * q[i]).sqrt();
    }
    sum
}

fn bhattacharyya(p: &[f64], q: &[f64]) -> f64 {
    -fidelity(p, q).ln()
}

fn hellinger(p: &[f64], q: &[f64]) -> f64 {
    2.0 * (1.0 - fidelity(p, q)).sqrt()
}

fn matusita(p: &[f64], q: &[f64]) -> f64 {
    (2.0 - 2.0 * fidelity(p, q)).sqrt()
}

fn squaredchord(p: &[f64], q: &[f64]) -> f64 {
    let mut sum = 0.0;
    for i in 0..p.len() {
        let d = p[i].sqrt() - q[i].sqrt();
        sum += d * d;
    }
    sum
}

fn pearson(p: &[f64], q: &[f64]) -> f64 {
    let mut sum = 0.0;
    for i in 0..p.len() {
        sum += (p[i] - q[i]) * (p[i] - q[i]) / q[i];
    }
    sum
}

fn neyman(p: &[f64], q: &[f64]) -> f64 {
    let mut sum = 0.0;
    for i in 0..p.len() {
        sum += (p[i] - q[i]) * (p[i] - q[i]) / p[i];
    }
    sum
}

fn squared(p: &[f64], q: &[f64]) -> f64 {
    let mut sum = 0.0;
    for i in 0..p.len() {
        sum += (p[i] - q[i]) * (p[i] - q[i]) / (p[i] + q[i]);
    }
    sum
}

fn divergence(p: &[f64], q: &[f64]) -> f64 {
    let mut sum = 0.0;
    for i in 0..p.len() {
        let s = p[i] + q[i];
        sum += (p[i] - q[i]) * (p[i] - q[i]) / (s * s);
    }
    2.0 * sum
}

fn clark(p: &[f64], q: &[f64]) -> f64 {
    let mut sum = 0.0;
    for i in 0..p.len() {
        let r = (p[i] - q[i]).abs() / (p[i] + q[i]);
        sum += r * r;
    }
    sum.sqrt()
}

fn additivesymmetric(p: &[f64], q: &[f64]) -> f64 {
    let mut sum = 0.0;
    for i in 0..p.len() {
        sum += (p[i] - q[i]) * (p[i] - q[i]) * (p[i] + q[i]) / (p[i] * q[i]);
    }
    sum
}
