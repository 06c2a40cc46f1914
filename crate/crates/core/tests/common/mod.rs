//! Random small string groups and brute-force oracles shared by the
//! property tests and the acceptance run.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use scg::perm::{intersect, Permutation};
use scg::sggi::{Labels, Sggi};

pub const CAP: u128 = 1 << 24;

pub fn random_involution(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut points: Vec<usize> = (0..n).collect();
    points.shuffle(rng);
    let pairs = rng.gen_range(1..=n / 2);
    let mut images: Vec<usize> = (0..n).collect();
    for k in 0..pairs {
        images.swap(points[2 * k], points[2 * k + 1]);
    }
    Permutation::from_images(&images).unwrap()
}

/// A random sggi with distinct generators, built generator by generator so
/// that the commuting constraints hold.
pub fn random_sggi(rng: &mut impl Rng, max_degree: usize) -> Sggi {
    loop {
        let n = rng.gen_range(3..=max_degree);
        let r: usize = rng.gen_range(2..=4);
        let mut rho: Vec<Permutation> = Vec::new();
        for i in 0..r {
            let found = (0..400).map(|_| random_involution(rng, n)).find(|t| {
                !rho.contains(t)
                    && rho
                        .iter()
                        .take(i.saturating_sub(1))
                        .all(|x| x.commutes_with(t))
            });
            match found {
                Some(t) => rho.push(t),
                None => break,
            }
        }
        if rho.len() == r {
            if let Ok(s) = Sggi::new(rho, n) {
                return s;
            }
        }
    }
}

pub fn closure(n: usize, gens: &[Permutation]) -> HashSet<Permutation> {
    let id = Permutation::identity(n);
    let mut seen = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x * *g;
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen
}

pub fn subsets(r: usize) -> impl Iterator<Item = Labels> {
    (0..1u32 << r).map(Labels)
}

pub fn parabolic_closures(s: &Sggi) -> HashMap<u32, HashSet<Permutation>> {
    subsets(s.rank())
        .map(|j| {
            let gens: Vec<Permutation> = j.to_vec().iter().map(|&i| s.generators()[i]).collect();
            (j.0, closure(s.degree(), &gens))
        })
        .collect()
}

pub fn brute_ip(s: &Sggi, sets: &HashMap<u32, HashSet<Permutation>>) -> bool {
    subsets(s.rank()).all(|j| {
        subsets(s.rank()).all(|k| {
            let meet = &sets[&j.intersection(k).0];
            sets[&j.0].intersection(&sets[&k.0]).count() == meet.len()
        })
    })
}

/// True when some word equal to the identity uses `ρk` an odd number of
/// times: label elements by the parity of `ρk` along a BFS tree of the
/// Cayley graph and look for an inconsistent edge.
pub fn odd_relation(s: &Sggi, k: usize) -> bool {
    let id = Permutation::identity(s.degree());
    let mut parity = HashMap::from([(id, false)]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for (i, g) in s.generators().iter().enumerate() {
            let y = x * *g;
            let py = parity[&x] ^ (i == k);
            match parity.get(&y) {
                Some(&old) if old != py => return true,
                Some(_) => {}
                None => {
                    parity.insert(y, py);
                    queue.push_back(y);
                }
            }
        }
    }
    false
}

pub fn random_c_group(rng: &mut impl Rng) -> Sggi {
    loop {
        let s = random_sggi(rng, 8);
        if s.check_ip_full(CAP).unwrap().holds() {
            return s;
        }
    }
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

/// Chain order, membership, one intersection and both IP checks against
/// brute-force closure.
pub fn oracle_agrees(s: &Sggi, rng: &mut impl Rng) -> Result<(), String> {
    let n = s.degree();
    let sets = parabolic_closures(s);
    let whole = &sets[&Labels::all(s.rank()).0];
    ensure(s.group().order() == whole.len() as u128, || {
        format!("order {} vs {}", s.group().order(), whole.len())
    })?;

    for _ in 0..30 {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(rng);
        let x = Permutation::from_images(&images).unwrap();
        ensure(s.group().contains(&x) == whole.contains(&x), || {
            format!("membership of {x}")
        })?;
    }

    let j = Labels(rng.gen_range(0..1u32 << s.rank()));
    let k = Labels(rng.gen_range(0..1u32 << s.rank()));
    let meet = intersect(s.parabolic_of(j), s.parabolic_of(k), CAP).map_err(|e| e.to_string())?;
    let expected: HashSet<Permutation> = sets[&j.0].intersection(&sets[&k.0]).copied().collect();
    ensure(meet.order() == expected.len() as u128, || {
        format!("intersection {j:?} {k:?}")
    })?;
    ensure(expected.iter().all(|x| meet.contains(x)), || {
        format!("intersection {j:?} {k:?} members")
    })?;

    let holds = brute_ip(s, &sets);
    let full = s.check_ip_full(CAP).map_err(|e| e.to_string())?;
    let recursive = s.check_ip_recursive(CAP).map_err(|e| e.to_string())?;
    ensure(full.holds() == holds, || "full check".into())?;
    ensure(recursive.holds() == holds, || "recursive check".into())?;
    for verdict in [&full, &recursive] {
        if let Some(w) = &verdict.witness {
            let (j, k) = (Labels::from_slice(&w.j), Labels::from_slice(&w.k));
            ensure(
                sets[&j.0].contains(&w.element)
                    && sets[&k.0].contains(&w.element)
                    && !sets[&j.intersection(k).0].contains(&w.element),
                || format!("witness {}", w.element),
            )?;
        }
    }
    Ok(())
}

/// The sesqui-extension facts for a string C-group `s` extended at `k` by
/// the transposition of two adjoined points.
pub fn sesqui_facts(s: &Sggi, k: usize) -> Result<(), String> {
    let ext = s.sesqui_extension_fresh(k).map_err(|e| e.to_string())?;
    let n = s.degree();
    let tau = Permutation::transposition(n + 2, n, n + 1);
    let (order, ext_order) = (s.group().order(), ext.group().order());

    // (1) same order, or a direct product with ⟨τ⟩
    ensure(ext_order == order || ext_order == 2 * order, || {
        format!("order {ext_order} from {order}")
    })?;
    ensure(
        (ext_order == 2 * order) == ext.group().contains(&tau),
        || "τ membership".into(),
    )?;
    // (2)
    if odd_relation(s, k) {
        ensure(ext_order == 2 * order, || {
            "odd relation without doubling".into()
        })?;
    }
    // (3)
    let odd_only_at_k = s
        .generators()
        .iter()
        .enumerate()
        .all(|(i, g)| g.is_even() != (i == k));
    if odd_only_at_k {
        ensure(ext_order == order, || {
            "odd generator doubled the order".into()
        })?;
    }
    // (4)
    let ext_ip = ext.check_ip_full(CAP).map_err(|e| e.to_string())?.holds();
    if !ext.group().contains(&tau) {
        ensure(ext_ip, || "extension lost the intersection property".into())?;
    }
    // extending the first generator keeps a string C-group
    let first = s.sesqui_extension_fresh(0).map_err(|e| e.to_string())?;
    ensure(
        first.check_ip_full(CAP).map_err(|e| e.to_string())?.holds(),
        || "first generator".into(),
    )
}
