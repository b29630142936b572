//! Deterministic, satellite-stratified dataset splitting.

use super::{DatasetError, PacketRecord};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Disjoint, exhaustive index sets over one record slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSplit {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
    pub seed: u64,
}

/// Split records into train/validation/test index sets.
///
/// The split is stratified by `sat_id`: global test and validation totals
/// are `round(n * frac)` (so within one record of the target), spread over
/// satellites by largest remainder, and every satellite with at least three
/// records lands in all three splits. Deterministic for a fixed seed.
pub fn split(
    records: &[PacketRecord],
    test_frac: f64,
    val_frac: f64,
    seed: u64,
) -> Result<DatasetSplit, DatasetError> {
    if !(test_frac >= 0.0 && val_frac >= 0.0 && test_frac + val_frac < 1.0) {
        return Err(DatasetError::InvalidFractions {
            test: test_frac,
            val: val_frac,
        });
    }
    if records.is_empty() {
        return Err(DatasetError::Empty);
    }

    // group indices by satellite, shuffled per group
    let mut groups: BTreeMap<u8, Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        groups.entry(r.sat_id).or_default().push(i);
    }
    for (sat, g) in groups.iter_mut() {
        let mut rng = ChaCha8Rng::seed_from_u64(crate::mix_seed(seed, *sat as u64));
        g.shuffle(&mut rng);
    }

    let sats: Vec<u8> = groups.keys().copied().collect();
    let lens: Vec<usize> = sats.iter().map(|s| groups[s].len()).collect();
    let n = records.len();
    let test_total = (n as f64 * test_frac).round() as usize;
    let val_total = (n as f64 * val_frac).round() as usize;

    let mut test_alloc = largest_remainder(&lens, test_frac, test_total, &lens);
    let remaining: Vec<usize> = lens
        .iter()
        .zip(&test_alloc)
        .map(|(l, t)| l - t)
        .collect();
    let mut val_alloc = largest_remainder(&lens, val_frac, val_total, &remaining);

    ensure_stratified(&lens, &mut test_alloc, &mut val_alloc);

    let mut out = DatasetSplit {
        train: Vec::new(),
        validation: Vec::new(),
        test: Vec::new(),
        seed,
    };
    for (k, sat) in sats.iter().enumerate() {
        let g = &groups[sat];
        let t = test_alloc[k];
        let v = val_alloc[k];
        out.test.extend_from_slice(&g[..t]);
        out.validation.extend_from_slice(&g[t..t + v]);
        out.train.extend_from_slice(&g[t + v..]);
    }
    out.train.sort_unstable();
    out.validation.sort_unstable();
    out.test.sort_unstable();
    Ok(out)
}

/// Allocate `total` items over groups proportionally to `lens * frac`,
/// flooring then handing out the shortfall by largest fractional part.
/// Each allocation is capped by `caps`.
fn largest_remainder(lens: &[usize], frac: f64, total: usize, caps: &[usize]) -> Vec<usize> {
    let ideals: Vec<f64> = lens.iter().map(|&l| l as f64 * frac).collect();
    let mut alloc: Vec<usize> = ideals
        .iter()
        .zip(caps)
        .map(|(x, &c)| (x.floor() as usize).min(c))
        .collect();
    let mut shortfall = total.saturating_sub(alloc.iter().sum::<usize>());

    // order groups by descending fractional remainder, index as tiebreak
    let mut order: Vec<usize> = (0..lens.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = ideals[a] - ideals[a].floor();
        let rb = ideals[b] - ideals[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    while shortfall > 0 {
        let mut gave = false;
        for &k in &order {
            if shortfall == 0 {
                break;
            }
            if alloc[k] < caps[k] {
                alloc[k] += 1;
                shortfall -= 1;
                gave = true;
            }
        }
        if !gave {
            break; // every group at capacity
        }
    }
    alloc
}

/// Post-adjust allocations so every group with >= 3 records has at least
/// one record in each split, trading one-for-one with donor groups so the
/// global totals stay fixed.
fn ensure_stratified(lens: &[usize], test: &mut [usize], val: &mut [usize]) {
    let k = lens.len();
    let train = |t: &[usize], v: &[usize], i: usize| lens[i] - t[i] - v[i];

    for i in 0..k {
        if lens[i] < 3 {
            continue;
        }
        // need a test record here: take one from the group with the most
        // test records that can spare it
        if test[i] == 0 && train(test, val, i) >= 2 {
            if let Some(d) = donor(lens, test, val, i, |t, _v, j| t[j]) {
                test[d] -= 1;
                test[i] += 1;
            }
        }
        if val[i] == 0 && train(test, val, i) >= 2 {
            if let Some(d) = donor(lens, val, test, i, |v, _t, j| v[j]) {
                val[d] -= 1;
                val[i] += 1;
            }
        }
        // need a train record: push one of ours out to whoever has train
        // room to take it
        if train(test, val, i) == 0 {
            let from_test = test[i] >= val[i];
            let (field, other): (&mut [usize], &[usize]) = if from_test {
                (&mut *test, &*val)
            } else {
                (&mut *val, &*test)
            };
            if field[i] >= 2 || (field[i] >= 1 && other[i] >= 1) {
                let d = (0..k)
                    .filter(|&j| j != i && lens[j] - field[j] - other[j] >= 2)
                    .max_by_key(|&j| lens[j] - field[j] - other[j]);
                if let Some(d) = d {
                    field[i] -= 1;
                    field[d] += 1;
                }
            }
        }
    }
}

/// Pick the group with the largest `measure` that can give one record away
/// without breaking its own stratification.
fn donor(
    lens: &[usize],
    primary: &[usize],
    secondary: &[usize],
    skip: usize,
    measure: impl Fn(&[usize], &[usize], usize) -> usize,
) -> Option<usize> {
    (0..lens.len())
        .filter(|&j| j != skip)
        .filter(|&j| {
            let keep = if lens[j] >= 3 { 1 } else { 0 };
            primary[j] >= keep + 1
        })
        .max_by_key(|&j| (measure(primary, secondary, j), usize::MAX - j))
}
