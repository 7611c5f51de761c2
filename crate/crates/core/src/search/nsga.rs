//! NSGA-II over architecture genomes.

use std::cmp::Ordering;
use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::rank::{sort_entries, RankingEntry, Scorer};
use crate::circuit::{Architecture, SearchSpace};
use crate::error::{bail, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct EvolutionConfig {
    pub population: usize,
    pub generations: usize,
    #[serde(default = "default_crossover")]
    pub crossover_rate: f64,
    /// Per-gene mutation probability; defaults to `1 / genes`.
    #[serde(default)]
    pub mutation_rate: Option<f64>,
    /// Drop the CNOT-count objective.
    #[serde(default)]
    pub single_objective: bool,
}

fn default_crossover() -> f64 {
    0.9
}

impl EvolutionConfig {
    pub fn new(population: usize, generations: usize) -> Self {
        EvolutionConfig {
            population,
            generations,
            crossover_rate: default_crossover(),
            mutation_rate: None,
            single_objective: false,
        }
    }
}

/// Genes: per layer, one rotation index per slot and qubit, then one bit per pair.
fn gene_count(space: &SearchSpace) -> usize {
    space.n_layers * (space.params_per_layer() + space.candidate_pairs.len())
}

fn gene_cardinality(space: &SearchSpace, g: usize) -> usize {
    let per = space.params_per_layer() + space.candidate_pairs.len();
    let i = g % per;
    if i < space.params_per_layer() {
        space.rotation_slots[i / space.n_qubits].len()
    } else {
        2
    }
}

fn get_gene(space: &SearchSpace, a: &Architecture, g: usize) -> usize {
    let per = space.params_per_layer() + space.candidate_pairs.len();
    let (l, i) = (g / per, g % per);
    let ppl = space.params_per_layer();
    if i < ppl {
        a.layers[l].rotations[i] as usize
    } else {
        (a.layers[l].pairs >> (i - ppl) & 1) as usize
    }
}

fn set_gene(space: &SearchSpace, a: &mut Architecture, g: usize, v: usize) {
    let per = space.params_per_layer() + space.candidate_pairs.len();
    let (l, i) = (g / per, g % per);
    let ppl = space.params_per_layer();
    if i < ppl {
        a.layers[l].rotations[i] = v as u8;
    } else {
        let bit = 1u64 << (i - ppl);
        if v == 1 {
            a.layers[l].pairs |= bit;
        } else {
            a.layers[l].pairs &= !bit;
        }
    }
}

fn dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
}

/// Fronts of indices, best first.
pub fn nondominated_sort(objectives: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let n = objectives.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut count = vec![0usize; n];
    let mut fronts = vec![Vec::new()];
    for p in 0..n {
        for q in 0..n {
            if dominates(&objectives[p], &objectives[q]) {
                dominated_by[p].push(q);
            } else if dominates(&objectives[q], &objectives[p]) {
                count[p] += 1;
            }
        }
        if count[p] == 0 {
            fronts[0].push(p);
        }
    }
    let mut i = 0;
    while !fronts[i].is_empty() {
        let mut next = Vec::new();
        for &p in &fronts[i] {
            for &q in &dominated_by[p] {
                count[q] -= 1;
                if count[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(next);
        i += 1;
    }
    fronts.pop();
    fronts
}

/// Crowding distance of each member of `front` (same order).
pub fn crowding_distance(objectives: &[Vec<f64>], front: &[usize]) -> Vec<f64> {
    let mut dist = vec![0.0; front.len()];
    if front.is_empty() {
        return dist;
    }
    let m = objectives[front[0]].len();
    for k in 0..m {
        let mut order: Vec<usize> = (0..front.len()).collect();
        order.sort_by(|&a, &b| objectives[front[a]][k].total_cmp(&objectives[front[b]][k]));
        let lo = objectives[front[order[0]]][k];
        let hi = objectives[front[*order.last().unwrap()]][k];
        dist[order[0]] = f64::INFINITY;
        dist[*order.last().unwrap()] = f64::INFINITY;
        if hi > lo {
            for w in 1..order.len().saturating_sub(1) {
                let gap = objectives[front[order[w + 1]]][k] - objectives[front[order[w - 1]]][k];
                dist[order[w]] += gap / (hi - lo);
            }
        }
    }
    dist
}

struct Ranked {
    rank: Vec<usize>,
    crowd: Vec<f64>,
}

fn rank_population(objectives: &[Vec<f64>]) -> (Vec<Vec<usize>>, Ranked) {
    let fronts = nondominated_sort(objectives);
    let mut rank = vec![0; objectives.len()];
    let mut crowd = vec![0.0; objectives.len()];
    for (r, front) in fronts.iter().enumerate() {
        for (&i, d) in front.iter().zip(crowding_distance(objectives, front)) {
            rank[i] = r;
            crowd[i] = d;
        }
    }
    (fronts, Ranked { rank, crowd })
}

fn tournament<R: Rng + ?Sized>(ranked: &Ranked, rng: &mut R) -> usize {
    let n = ranked.rank.len();
    let a = rng.gen_range(0..n);
    let b = rng.gen_range(0..n);
    match ranked.rank[a].cmp(&ranked.rank[b]) {
        Ordering::Less => a,
        Ordering::Greater => b,
        Ordering::Equal if ranked.crowd[b] > ranked.crowd[a] => b,
        Ordering::Equal => a,
    }
}

/// NSGA-II with objectives (score, active CNOTs), or score alone.
///
/// The initial population and every generation of offspring are scored in
/// parallel; each distinct architecture is scored once, so at most
/// `population · generations` scores are computed. Returns every scored
/// architecture, best score first.
pub fn nsga2<R, F>(
    space: &SearchSpace,
    config: &EvolutionConfig,
    rng: &mut R,
    score: F,
) -> Result<Vec<RankingEntry>>
where
    R: Rng + ?Sized,
    F: Fn(&Architecture) -> Result<RankingEntry> + Sync,
{
    if config.population < 2 {
        bail!(Argument, "population must be at least 2, got {}", config.population);
    }
    if config.generations == 0 {
        bail!(Argument, "need at least one generation");
    }
    let genes = gene_count(space);
    let mutation = config.mutation_rate.unwrap_or(1.0 / genes.max(1) as f64);
    let mut cache: HashMap<String, RankingEntry> = HashMap::new();

    let evaluate = |batch: &[Architecture], cache: &mut HashMap<String, RankingEntry>| -> Result<()> {
        let mut fresh: Vec<&Architecture> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for a in batch {
            let text = a.to_text(space);
            if !cache.contains_key(&text) && seen.insert(text) {
                fresh.push(a);
            }
        }
        let scored = fresh.par_iter().map(|a| score(a)).collect::<Result<Vec<_>>>()?;
        for e in scored {
            cache.insert(e.architecture.clone(), e);
        }
        Ok(())
    };
    let objectives_of = |pop: &[Architecture], cache: &HashMap<String, RankingEntry>| -> Vec<Vec<f64>> {
        pop.iter()
            .map(|a| {
                let e = &cache[&a.to_text(space)];
                if config.single_objective {
                    vec![e.objective]
                } else {
                    vec![e.objective, f64::from(e.active_cnots)]
                }
            })
            .collect()
    };

    let mut pop: Vec<Architecture> =
        (0..config.population).map(|_| space.sample_uniform(rng)).collect();
    evaluate(&pop, &mut cache)?;

    for _ in 1..config.generations {
        let objs = objectives_of(&pop, &cache);
        let (_, ranked) = rank_population(&objs);
        let mut offspring = Vec::with_capacity(config.population);
        while offspring.len() < config.population {
            let p1 = &pop[tournament(&ranked, rng)];
            let p2 = &pop[tournament(&ranked, rng)];
            let mut child = p1.clone();
            if rng.gen::<f64>() < config.crossover_rate {
                for g in 0..genes {
                    if rng.gen::<bool>() {
                        set_gene(space, &mut child, g, get_gene(space, p2, g));
                    }
                }
            }
            for g in 0..genes {
                if rng.gen::<f64>() < mutation {
                    let v = rng.gen_range(0..gene_cardinality(space, g));
                    set_gene(space, &mut child, g, v);
                }
            }
            offspring.push(child);
        }
        evaluate(&offspring, &mut cache)?;

        // Survivor selection over distinct members of parents ∪ offspring.
        let mut merged: Vec<Architecture> = Vec::with_capacity(2 * config.population);
        let mut dupes = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for a in pop.into_iter().chain(offspring) {
            if seen.insert(a.to_text(space)) {
                merged.push(a);
            } else {
                dupes.push(a);
            }
        }
        let objs = objectives_of(&merged, &cache);
        let (fronts, _) = rank_population(&objs);
        let mut next: Vec<Architecture> = Vec::with_capacity(config.population);
        for front in fronts {
            if next.len() + front.len() <= config.population {
                next.extend(front.iter().map(|&i| merged[i].clone()));
            } else {
                let d = crowding_distance(&objs, &front);
                let mut order: Vec<usize> = (0..front.len()).collect();
                order.sort_by(|&a, &b| d[b].total_cmp(&d[a]).then(a.cmp(&b)));
                let room = config.population - next.len();
                next.extend(order.into_iter().take(room).map(|k| merged[front[k]].clone()));
            }
            if next.len() == config.population {
                break;
            }
        }
        next.extend(dupes.into_iter().take(config.population - next.len()));
        pop = next;
    }

    let mut entries: Vec<RankingEntry> = cache.into_values().collect();
    sort_entries(&mut entries);
    Ok(entries)
}

/// Evolutionary ranking of subnets against a frozen ensemble.
pub fn rank_evolutionary<R: Rng + ?Sized>(
    scorer: &Scorer<'_>,
    config: &EvolutionConfig,
    rng: &mut R,
) -> Result<Vec<RankingEntry>> {
    nsga2(scorer.ensemble().space(), config, rng, |a| scorer.score(a))
}
