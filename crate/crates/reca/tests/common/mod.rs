//! Shared test oracles: independent, deliberately naive reference
//! implementations that the optimized library code is checked against.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use reca::ca::BinaryState;
use reca::reservoir::FeatureMatrix;

// ---------------------------------------------------------------------------
// Cellular automaton oracles: per-cell table lookups on Vec<u8> states.
// ---------------------------------------------------------------------------

/// Rule outputs indexed by neighborhood value `4l + 2c + r`.
pub fn rule_outputs(n: u8) -> [u8; 8] {
    let mut out = [0u8; 8];
    for (i, o) in out.iter_mut().enumerate() {
        *o = (n >> i) & 1;
    }
    out
}

pub fn outputs_to_number(outputs: &[u8; 8]) -> u8 {
    outputs
        .iter()
        .enumerate()
        .map(|(i, &b)| b << i)
        .fold(0, |acc, x| acc | x)
}

/// Truth-table reflection: output for (l,c,r) = original output for (r,c,l).
pub fn reflect_outputs(outputs: &[u8; 8]) -> [u8; 8] {
    let mut out = [0u8; 8];
    for nb in 0..8usize {
        let (l, c, r) = ((nb >> 2) & 1, (nb >> 1) & 1, nb & 1);
        let swapped = (r << 2) | (c << 1) | l;
        out[nb] = outputs[swapped];
    }
    out
}

/// Truth-table complement: output for nb = 1 − original output for !nb.
pub fn complement_outputs(outputs: &[u8; 8]) -> [u8; 8] {
    let mut out = [0u8; 8];
    for nb in 0..8usize {
        out[nb] = 1 - outputs[!nb & 7];
    }
    out
}

/// Smallest rule number in `n`'s orbit under {id, reflect, complement,
/// reflect∘complement}, computed entirely through truth-table transforms.
pub fn brute_canonical(n: u8) -> u8 {
    let o = rule_outputs(n);
    let r = reflect_outputs(&o);
    let c = complement_outputs(&o);
    let rc = complement_outputs(&r);
    [o, r, c, rc]
        .iter()
        .map(outputs_to_number)
        .min()
        .expect("nonempty")
}

/// One synchronous update with periodic boundaries, cell by cell.
pub fn naive_step(outputs: &[u8; 8], cells: &[u8]) -> Vec<u8> {
    let len = cells.len();
    (0..len)
        .map(|i| {
            let l = cells[(i + len - 1) % len] as usize;
            let c = cells[i] as usize;
            let r = cells[(i + 1) % len] as usize;
            outputs[(l << 2) | (c << 1) | r]
        })
        .collect()
}

/// `steps + 1` rows, row 0 the initial state.
pub fn naive_evolve(outputs: &[u8; 8], cells: &[u8], steps: usize) -> Vec<Vec<u8>> {
    let mut rows = vec![cells.to_vec()];
    for _ in 0..steps {
        let next = naive_step(outputs, rows.last().expect("nonempty"));
        rows.push(next);
    }
    rows
}

pub fn rotate_bits_high(bits: &[u8], k: usize) -> Vec<u8> {
    let len = bits.len();
    let mut out = vec![0u8; len];
    for (i, &b) in bits.iter().enumerate() {
        out[(i + k) % len] = b;
    }
    out
}

pub fn hamming_bits(a: &[u8], b: &[u8]) -> usize {
    assert_eq!(a.len(), b.len(), "hamming oracle needs equal lengths");
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

// ---------------------------------------------------------------------------
// Feature-matrix construction helpers.
// ---------------------------------------------------------------------------

pub fn state_of_bits(bits: &[u8]) -> BinaryState {
    BinaryState::from_bits(bits).expect("valid test bits")
}

pub fn matrix_of(rows: &[Vec<u8>], labels: &[i32]) -> FeatureMatrix {
    let states: Vec<BinaryState> = rows.iter().map(|r| state_of_bits(r)).collect();
    FeatureMatrix::from_rows(states, labels.to_vec()).expect("valid test matrix")
}

// ---------------------------------------------------------------------------
// Nearest-neighbor / centroid oracles with the documented tie rules.
// ---------------------------------------------------------------------------

/// Exhaustive KNN: full sort by (distance, index), majority vote, vote ties
/// to the smallest class id.
pub fn naive_knn(rows: &[Vec<u8>], labels: &[i32], query: &[u8], k: usize) -> i32 {
    let mut order: Vec<(usize, usize)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (hamming_bits(r, query), i))
        .collect();
    order.sort();
    let mut votes: std::collections::BTreeMap<i32, usize> = std::collections::BTreeMap::new();
    for &(_, idx) in order.iter().take(k) {
        *votes.entry(labels[idx]).or_insert(0) += 1;
    }
    let mut best_class = 0;
    let mut best_votes = 0;
    for (&class, &count) in &votes {
        if count > best_votes {
            best_votes = count;
            best_class = class;
        }
    }
    best_class
}

/// Nearest per-class mean by plainly computed squared Euclidean distance;
/// distance ties to the smallest class id.
pub fn naive_centroid_predict(rows: &[Vec<u8>], labels: &[i32], query: &[u8]) -> i32 {
    let mut classes: Vec<i32> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let dim = rows[0].len();
    let mut best_class = classes[0];
    let mut best_dist = f64::INFINITY;
    for &class in &classes {
        let members: Vec<&Vec<u8>> = rows
            .iter()
            .zip(labels)
            .filter(|(_, &l)| l == class)
            .map(|(r, _)| r)
            .collect();
        let mut mean = vec![0.0f64; dim];
        for row in &members {
            for (m, &b) in mean.iter_mut().zip(row.iter()) {
                *m += b as f64;
            }
        }
        for m in &mut mean {
            *m /= members.len() as f64;
        }
        let dist: f64 = query
            .iter()
            .zip(&mean)
            .map(|(&q, &m)| (q as f64 - m) * (q as f64 - m))
            .sum();
        if dist < best_dist {
            best_dist = dist;
            best_class = class;
        }
    }
    best_class
}

// ---------------------------------------------------------------------------
// DTW oracle: explicit enumeration of every monotone alignment path.
// ---------------------------------------------------------------------------

fn dtw_in_band(i: usize, j: usize, n: usize, m: usize, window: Option<usize>) -> bool {
    match window {
        None => true,
        Some(w) => {
            let lhs = (i as i64 * (m as i64 - 1) - j as i64 * (n as i64 - 1)).abs();
            let rhs = w as i64 * (n as i64 - 1).max(m as i64 - 1);
            lhs <= rhs
        }
    }
}

/// Minimum path cost over all monotone alignments, found by walking every
/// path from (0,0) to (n−1,m−1). Exponential and only usable on short
/// series — which is the point: it shares no structure with the DP.
/// Returns None when the band disconnects the endpoints.
pub fn dtw_brute(x: &[f64], y: &[f64], window: Option<usize>) -> Option<f64> {
    assert!(!x.is_empty() && !y.is_empty());
    let (n, m) = (x.len(), y.len());
    if !dtw_in_band(0, 0, n, m, window) {
        return None;
    }
    let mut best: Option<f64> = None;
    fn walk(
        x: &[f64],
        y: &[f64],
        i: usize,
        j: usize,
        acc: f64,
        window: Option<usize>,
        best: &mut Option<f64>,
    ) {
        let acc = acc + (x[i] - y[j]).abs();
        if i == x.len() - 1 && j == y.len() - 1 {
            if best.map_or(true, |b| acc < b) {
                *best = Some(acc);
            }
            return;
        }
        let moves = [(i + 1, j), (i, j + 1), (i + 1, j + 1)];
        for &(ni, nj) in &moves {
            if ni < x.len() && nj < y.len() && dtw_in_band(ni, nj, x.len(), y.len(), window) {
                walk(x, y, ni, nj, acc, window, best);
            }
        }
    }
    walk(x, y, 0, 0, 0.0, window, &mut best);
    best
}

// ---------------------------------------------------------------------------
// Welch t-test oracle: Student CDF through the regularized incomplete beta
// function (continued fraction), fully independent of the library's
// distribution code. Plus fixtures pinned from an external reference
// statistics package.
// ---------------------------------------------------------------------------

fn ln_gamma(x: f64) -> f64 {
    // Lanczos approximation, g = 7, n = 9.
    const COEFFS: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // Reflection formula.
        return std::f64::consts::PI.ln()
            - (std::f64::consts::PI * x).sin().ln()
            - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEFFS[0];
    for (i, &c) in COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Continued fraction for the incomplete beta function (Lentz's method).
fn betacf(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 300;
    const EPS: f64 = 1e-15;
    const FPMIN: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta I_x(a, b).
fn betai(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * betacf(a, b, x) / a
    } else {
        1.0 - front * betacf(b, a, 1.0 - x) / b
    }
}

/// Two-sided p-value for a t statistic with `df` degrees of freedom.
pub fn student_two_sided_p(t: f64, df: f64) -> f64 {
    betai(df / 2.0, 0.5, df / (df + t * t))
}

/// Welch's t-test computed from first principles: unbiased variances,
/// Welch–Satterthwaite degrees of freedom, p through `student_two_sided_p`.
pub fn welch_oracle(a: &[f64], b: &[f64]) -> (f64, f64, f64) {
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let var = |v: &[f64], m: f64| {
        v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64
    };
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, mb) = (mean(a), mean(b));
    let (va, vb) = (var(a, ma), var(b, mb));
    let sea = va / na;
    let seb = vb / nb;
    let t = (ma - mb) / (sea + seb).sqrt();
    let df = (sea + seb) * (sea + seb)
        / (sea * sea / (na - 1.0) + seb * seb / (nb - 1.0));
    (t, df, student_two_sided_p(t, df))
}

/// Fixtures pinned from an external reference implementation of
/// `ttest_ind(a, b, equal_var=False)`: (a, b, t, p).
pub const WELCH_FIXTURES: [(&[f64], &[f64], f64, f64); 10] = [
    (
        &[1.690525703800356, -0.4659373705408328, 0.0328201636785844, 0.40751628299650783, -0.7889230286257386],
        &[0.5020655729059481, 0.4991096141420686, -1.2547243063454208, 1.5176580056634932, 1.1004985159195493],
        -0.46545446337525576,
        0.6541190691234108,
    ),
    (
        &[-0.6254289739667597, -0.17154826119572117, 0.5052993741967516, -0.261356415191647, -0.2427490786725466],
        &[-1.4532414124907906, 0.5545803118918878, 0.12388090528703843, 0.2744599237599636, -1.5265245318698402],
        0.5081513366937499,
        0.6317533511541571,
    ),
    (
        &[2.8253498455932378, 2.077167767728179, 1.806430028356806, 3.014536110380556, 1.977306985069677, 1.2746606504267126, 1.7973860722861565, 0.8558424490141388, 2.5246982746716276, 1.7917628407399908],
        &[-0.4851070504091355, 3.144940263150991, -2.3021511788116777, 2.070858712652182],
        1.1094173757520607,
        0.3441437823163681,
    ),
    (
        &[-1.412882960624235, -1.1324318679333618, -1.2408439691199464],
        &[-0.6614073118359429, -0.5701517366212, -1.1988241255739196, -0.8477800273569394, -1.153995920375705, -0.9295814338016055, -1.3258511589264395, -1.6125017609501169],
        -1.5124981516332812,
        0.16594303883296688,
    ),
    (
        &[4.590704024560777, 11.149365555272535, 16.742785158423096, 10.80823489152366, 8.426186141797443, 15.736056586995822],
        &[12.02373018466372, 12.010143398521162, 12.025257773555532, 11.986762280243315, 11.969052365941112, 11.856503653396445],
        -0.39770773110884833,
        0.7072511384401332,
    ),
    (
        &[0.9050162412318105, 0.899052245495601, 0.9119308592234401, 0.8963118153155215],
        &[0.891404451822043, 0.918505840521577, 0.9454930594512002, 0.9142486531560273],
        -1.2336796878618108,
        0.292122219258048,
    ),
    (
        &[4.11014313897925, 3.8064080777418168, 3.9499831889246266, 4.699806263199837, 3.8200179065417945, 6.4976391155975834, 4.7173647639246195, 5.108648371494731, 6.438239520733757, 6.503318520416911, 4.787267032982439, 5.331974215488498],
        &[5.73502658437736, 4.80714453965022, 3.2219871470414914, 5.65470570370311, 5.894352304820533, 5.415502614298011, 4.076455343286782, 4.803972687692035, 4.409230181136864, 4.700288762672173, 6.296885192726673, 6.529579633393156],
        -0.362937901478823,
        0.7201276007466244,
    ),
    (
        &[1.3388363868193223, 1.097490239556659, 1.3532579791117716, -0.024484373212886216, -0.15132692297413255, -1.3472903747521479, -0.11173490010014778],
        &[7.519893973252523, 4.738078658507652, 2.3157659531462738, 2.056146695732957, 1.2710200168285084, 3.7487406994751513, 3.783091387005161, 0.11375668599812361, 3.9726703944834045],
        -3.6454659187119867,
        0.0034392463365286296,
    ),
    (
        &[94.30527729481503, 114.26721156648836, 101.56843983704184, 117.17730049660236, 95.41873207113991],
        &[89.71201613347922, 90.2998083522699, 91.05594829916454, 90.56588248862741, 88.76647605627244, 90.18290070161477, 90.02224473854056, 89.570931406444, 89.35189470710765, 91.74757723934864],
        3.0312994235485653,
        0.03840339489977831,
    ),
    (
        &[0.48048067593192184, 0.45770386814360964, 0.531855641640622, 0.5065311488631127, 0.4962093066847041, 0.5390650905525246, 0.5244312707946343, 0.5181095000475546],
        &[0.4771360387513128, 0.42269091390678326, 0.3506462440727622],
        2.3735254389503178,
        0.12488239700087879,
    ),
];

// ---------------------------------------------------------------------------
// Dense averaged-SGD reference: same schedule, same shuffles, no sparse
// tricks — weights updated and averaged entry by entry.
// ---------------------------------------------------------------------------

pub struct DenseSgdResult {
    pub classes: Vec<i32>,
    /// Class-major weights of the retained epoch's averaged iterate.
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
    pub train_loss: Vec<f64>,
    pub best_epoch: usize,
}

fn argmax_first_oracle(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

pub fn dense_averaged_sgd(
    rows: &[Vec<u8>],
    labels: &[i32],
    reg: f64,
    epochs: usize,
    seed: u64,
) -> DenseSgdResult {
    let mut classes: Vec<i32> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let n_classes = classes.len();
    let dim = rows[0].len();
    let n = rows.len();
    let y_idx: Vec<usize> = labels
        .iter()
        .map(|l| classes.binary_search(l).expect("present"))
        .collect();

    let alpha = reg;
    let eta0 = (1.0 / alpha.sqrt()).sqrt();
    let t0 = 1.0 / (eta0 * alpha);

    // Feature-major, like the library: w[j * n_classes + c].
    let mut w = vec![0.0f64; dim * n_classes];
    let mut w_sum = vec![0.0f64; dim * n_classes];
    let mut bias = vec![0.0f64; n_classes];
    let mut bias_sum = vec![0.0f64; n_classes];
    let mut t = 0u64;

    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let evaluate = |w: &[f64], b: &[f64]| -> (f64, f64) {
        let mut hinge_sum = 0.0;
        let mut correct = 0usize;
        for (i, row) in rows.iter().enumerate() {
            let mut scores = b.to_vec();
            for (j, &bit) in row.iter().enumerate() {
                if bit == 1 {
                    for (c, score) in scores.iter_mut().enumerate() {
                        *score += w[j * n_classes + c];
                    }
                }
            }
            for (c, &score) in scores.iter().enumerate() {
                let y = if y_idx[i] == c { 1.0 } else { -1.0 };
                hinge_sum += (1.0 - y * score).max(0.0);
            }
            if argmax_first_oracle(&scores) == y_idx[i] {
                correct += 1;
            }
        }
        let l2: f64 = w.iter().map(|x| x * x).sum();
        (
            hinge_sum / n as f64 + 0.5 * alpha * l2,
            correct as f64 / n as f64,
        )
    };

    let mut best: Option<(f64, usize, Vec<f64>, Vec<f64>)> = None;
    let mut train_loss = Vec::with_capacity(epochs);

    for epoch in 0..epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (alpha * (t0 + t as f64));
            let decay = 1.0 - eta * alpha;
            for entry in w.iter_mut() {
                *entry *= decay;
            }
            let row = &rows[i];
            let mut scores = bias.clone();
            for (j, &bit) in row.iter().enumerate() {
                if bit == 1 {
                    for (c, score) in scores.iter_mut().enumerate() {
                        *score += w[j * n_classes + c];
                    }
                }
            }
            for c in 0..n_classes {
                let y = if y_idx[i] == c { 1.0 } else { -1.0 };
                if y * scores[c] < 1.0 {
                    for (j, &bit) in row.iter().enumerate() {
                        if bit == 1 {
                            w[j * n_classes + c] += eta * y;
                        }
                    }
                    bias[c] += eta * y;
                }
            }
            for (s, &x) in w_sum.iter_mut().zip(w.iter()) {
                *s += x;
            }
            for (s, &x) in bias_sum.iter_mut().zip(bias.iter()) {
                *s += x;
            }
        }
        let t_f = t as f64;
        let wbar: Vec<f64> = w_sum.iter().map(|x| x / t_f).collect();
        let bbar: Vec<f64> = bias_sum.iter().map(|x| x / t_f).collect();
        let (objective, _acc) = evaluate(&wbar, &bbar);
        if best.as_ref().map_or(true, |(b, ..)| objective < *b) {
            best = Some((objective, epoch, wbar, bbar));
        }
        train_loss.push(best.as_ref().expect("set").0);
    }

    let (weights, bias, best_epoch) = match best {
        Some((_, epoch, wbar, bbar)) => {
            let mut class_major = vec![0.0f64; dim * n_classes];
            for j in 0..dim {
                for c in 0..n_classes {
                    class_major[c * dim + j] = wbar[j * n_classes + c];
                }
            }
            (class_major, bbar, epoch)
        }
        None => (vec![0.0; dim * n_classes], vec![0.0; n_classes], 0),
    };
    DenseSgdResult {
        classes,
        weights,
        bias,
        train_loss,
        best_epoch,
    }
}

// ---------------------------------------------------------------------------
// Full-batch convex reference for the hinge + L2 objective: slow subgradient
// descent with iterate averaging, used to benchmark the fast trainer's
// accuracy rather than its exact weights.
// ---------------------------------------------------------------------------

pub fn reference_train_accuracy(rows: &[Vec<u8>], labels: &[i32], reg: f64, iters: usize) -> f64 {
    let mut classes: Vec<i32> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let n_classes = classes.len();
    let dim = rows[0].len();
    let n = rows.len();
    let y_idx: Vec<usize> = labels
        .iter()
        .map(|l| classes.binary_search(l).expect("present"))
        .collect();

    let mut w = vec![0.0f64; n_classes * dim];
    let mut b = vec![0.0f64; n_classes];
    let mut w_avg = vec![0.0f64; n_classes * dim];
    let mut b_avg = vec![0.0f64; n_classes];

    for k in 0..iters {
        // Full-batch subgradient of hinge_sum/n + (reg/2)|w|^2.
        let mut gw = vec![0.0f64; n_classes * dim];
        let mut gb = vec![0.0f64; n_classes];
        for (i, row) in rows.iter().enumerate() {
            for c in 0..n_classes {
                let y = if y_idx[i] == c { 1.0 } else { -1.0 };
                let mut score = b[c];
                for (j, &bit) in row.iter().enumerate() {
                    if bit == 1 {
                        score += w[c * dim + j];
                    }
                }
                if y * score < 1.0 {
                    for (j, &bit) in row.iter().enumerate() {
                        if bit == 1 {
                            gw[c * dim + j] -= y / n as f64;
                        }
                    }
                    gb[c] -= y / n as f64;
                }
            }
        }
        for (g, &x) in gw.iter_mut().zip(w.iter()) {
            *g += reg * x;
        }
        let step = 1.0 / (reg * (k as f64 + 1.0 / reg));
        for (x, g) in w.iter_mut().zip(gw.iter()) {
            *x -= step * g;
        }
        for (x, g) in b.iter_mut().zip(gb.iter()) {
            *x -= step * g;
        }
        for (a, &x) in w_avg.iter_mut().zip(w.iter()) {
            *a += x;
        }
        for (a, &x) in b_avg.iter_mut().zip(b.iter()) {
            *a += x;
        }
    }
    for a in w_avg.iter_mut() {
        *a /= iters as f64;
    }
    for a in b_avg.iter_mut() {
        *a /= iters as f64;
    }

    let mut correct = 0usize;
    for (i, row) in rows.iter().enumerate() {
        let mut scores = b_avg.clone();
        for (c, score) in scores.iter_mut().enumerate() {
            for (j, &bit) in row.iter().enumerate() {
                if bit == 1 {
                    *score += w_avg[c * dim + j];
                }
            }
        }
        if argmax_first_oracle(&scores) == y_idx[i] {
            correct += 1;
        }
    }
    correct as f64 / n as f64
}

// ---------------------------------------------------------------------------
// Reference multiclass perceptron with mirrored shuffling.
// ---------------------------------------------------------------------------

pub struct PerceptronTrace {
    pub mistake_rates: Vec<f64>,
    /// Class-major final weights.
    pub weights: Vec<f64>,
    pub classes: Vec<i32>,
}

pub fn naive_perceptron(
    rows: &[Vec<u8>],
    labels: &[i32],
    epochs: usize,
    seed: u64,
) -> PerceptronTrace {
    let mut classes: Vec<i32> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let n_classes = classes.len();
    let dim = rows[0].len();
    let n = rows.len();
    let y_idx: Vec<usize> = labels
        .iter()
        .map(|l| classes.binary_search(l).expect("present"))
        .collect();

    let mut w = vec![0.0f64; n_classes * dim];
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mistake_rates = Vec::with_capacity(epochs);

    for _ in 0..epochs {
        order.shuffle(&mut rng);
        let mut mistakes = 0usize;
        for &i in &order {
            let row = &rows[i];
            let mut scores = vec![0.0f64; n_classes];
            for (c, score) in scores.iter_mut().enumerate() {
                for (j, &bit) in row.iter().enumerate() {
                    if bit == 1 {
                        *score += w[c * dim + j];
                    }
                }
            }
            let predicted = argmax_first_oracle(&scores);
            if predicted != y_idx[i] {
                mistakes += 1;
                for (j, &bit) in row.iter().enumerate() {
                    if bit == 1 {
                        w[y_idx[i] * dim + j] += 1.0;
                        w[predicted * dim + j] -= 1.0;
                    }
                }
            }
        }
        mistake_rates.push(mistakes as f64 / n as f64);
    }
    PerceptronTrace {
        mistake_rates,
        weights: w,
        classes,
    }
}

// ---------------------------------------------------------------------------
// Exact linear-separability oracle: phase-1 simplex on the margin-1
// feasibility LP. For each sample i and class c ≠ y_i the constraint
// (w_{y_i} − w_c)·x̃_i ≥ 1 (x̃ = x with an appended bias coordinate); the
// set is separable by an argmax linear classifier iff the LP is feasible.
// ---------------------------------------------------------------------------

pub fn lp_separable(rows: &[Vec<u8>], labels: &[i32]) -> bool {
    let mut classes: Vec<i32> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let n_classes = classes.len();
    if n_classes < 2 {
        return true;
    }
    let dim = rows[0].len() + 1; // appended bias coordinate
    let y_idx: Vec<usize> = labels
        .iter()
        .map(|l| classes.binary_search(l).expect("present"))
        .collect();

    // Constraint rows over z = vec(W) in R^{n_classes * dim}.
    let n_z = n_classes * dim;
    let mut a_rows: Vec<Vec<f64>> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut x = vec![0.0f64; dim];
        for (j, &bit) in row.iter().enumerate() {
            x[j] = bit as f64;
        }
        x[dim - 1] = 1.0;
        for c in 0..n_classes {
            if c == y_idx[i] {
                continue;
            }
            let mut constraint = vec![0.0f64; n_z];
            for j in 0..dim {
                constraint[y_idx[i] * dim + j] += x[j];
                constraint[c * dim + j] -= x[j];
            }
            a_rows.push(constraint);
        }
    }
    let m = a_rows.len();
    if m == 0 {
        return true;
    }

    // Variables: z+ (n_z), z- (n_z), slack s (m), artificial a (m).
    // Constraint: A z+ − A z− − s + a = 1. Minimize sum(a).
    let n_vars = 2 * n_z + 2 * m;
    let mut tab = vec![vec![0.0f64; n_vars + 1]; m + 1];
    for (r, row) in a_rows.iter().enumerate() {
        for j in 0..n_z {
            tab[r][j] = row[j];
            tab[r][n_z + j] = -row[j];
        }
        tab[r][2 * n_z + r] = -1.0; // slack
        tab[r][2 * n_z + m + r] = 1.0; // artificial
        tab[r][n_vars] = 1.0; // rhs
    }
    // Phase-1 reduced costs: cost 1 on artificials, canonicalized by
    // subtracting every constraint row (the artificials start basic).
    for j in 0..=n_vars {
        let col_sum: f64 = (0..m).map(|r| tab[r][j]).sum();
        tab[m][j] = -col_sum;
    }
    for r in 0..m {
        tab[m][2 * n_z + m + r] = 0.0;
    }

    let mut basis: Vec<usize> = (0..m).map(|r| 2 * n_z + m + r).collect();
    const EPS: f64 = 1e-9;
    loop {
        // Bland's rule: smallest-index entering column with negative cost.
        let entering = (0..n_vars).find(|&j| tab[m][j] < -EPS);
        let Some(e) = entering else { break };
        // Ratio test; Bland ties by smallest basis variable.
        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for r in 0..m {
            if tab[r][e] > EPS {
                let ratio = tab[r][n_vars] / tab[r][e];
                if ratio < best_ratio - EPS
                    || (ratio < best_ratio + EPS
                        && leave.map_or(true, |l| basis[r] < basis[l]))
                {
                    best_ratio = ratio;
                    leave = Some(r);
                }
            }
        }
        let Some(l) = leave else {
            // Unbounded cannot happen in phase 1; bail out defensively.
            break;
        };
        // Pivot on (l, e).
        let pivot = tab[l][e];
        for v in tab[l].iter_mut() {
            *v /= pivot;
        }
        for r in 0..=m {
            if r != l && tab[r][e].abs() > 0.0 {
                let factor = tab[r][e];
                let pivot_row = tab[l].clone();
                for (v, &p) in tab[r].iter_mut().zip(pivot_row.iter()) {
                    *v -= factor * p;
                }
            }
        }
        basis[l] = e;
    }
    // Objective value = −tab[m][rhs]; feasible iff it reaches 0.
    (-tab[m][n_vars]).abs() <= 1e-7
}
