//! Genetic-algorithm metaheuristic: greedy-seeded population, rank selection,
//! per-request facility crossover, relocation mutation, and elitism over the
//! pooled parents and children.

use std::hash::{DefaultHasher, Hash, Hasher};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::{
    Connectivity, CostBreakdown, CostWeights, Instance, MecId, Placement, Protection,
    RequestPlacement, SliceAssignment,
};

use super::greedy::solve_greedy;
use super::{candidate_pairs, latency_order, Loading, SolveError};

/// Genetic-algorithm parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    /// Population size (even, at least 2).
    #[serde(default = "default_population")]
    pub population: usize,
    /// Number of generations.
    #[serde(default = "default_generations")]
    pub generations: usize,
    /// Crossover threshold: a parent pair recombines when the uniform draw
    /// does not exceed it.
    #[serde(default = "default_crossover")]
    pub crossover_threshold: f64,
    /// Mutation threshold, applied per child.
    #[serde(default = "default_mutation")]
    pub mutation_threshold: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_population() -> usize {
    100
}
fn default_generations() -> usize {
    40
}
fn default_crossover() -> f64 {
    0.9
}
fn default_mutation() -> f64 {
    0.7
}

impl GaConfig {
    pub fn with_seed(seed: u64) -> Self {
        GaConfig {
            population: default_population(),
            generations: default_generations(),
            crossover_threshold: default_crossover(),
            mutation_threshold: default_mutation(),
            seed,
        }
    }

    fn validate(&self) -> Result<(), SolveError> {
        if self.population < 2 || !self.population.is_multiple_of(2) {
            return Err(SolveError::BadConfig(format!(
                "population must be even and >= 2, got {}",
                self.population
            )));
        }
        if self.generations == 0 {
            return Err(SolveError::BadConfig("generations must be >= 1".into()));
        }
        for (name, v) in [
            ("crossover threshold", self.crossover_threshold),
            ("mutation threshold", self.mutation_threshold),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(SolveError::BadConfig(format!("{name} {v} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig::with_seed(0)
    }
}

/// Best/mean/worst fitness of the population after one generation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenStats {
    pub generation: usize,
    pub best: f64,
    pub mean: f64,
    pub worst: f64,
}

/// Result of a GA run.
#[derive(Debug, Clone)]
pub struct MgaOutcome {
    pub placement: Placement,
    pub cost: CostBreakdown,
    /// Entry 0 describes the initial population; entry g the population
    /// after generation g.
    pub history: Vec<GenStats>,
}

/// Renders a fitness history as CSV with a `generation,best,mean,worst`
/// header.
pub fn history_csv(history: &[GenStats]) -> String {
    let mut out = String::from("generation,best,mean,worst\n");
    for g in history {
        out.push_str(&format!(
            "{},{:.6},{:.6},{:.6}\n",
            g.generation, g.best, g.mean, g.worst
        ));
    }
    out
}

/// One candidate solution: a feasible placement of every admissible request,
/// with cached packing state and fitness.
#[derive(Debug, Clone)]
pub struct Chromosome {
    assignments: Vec<Option<RequestPlacement>>,
    state: Loading,
    forwarding_sum: f64,
    fitness: f64,
    mecs: u32,
    servers: u32,
}

impl Chromosome {
    fn from_placement(inst: &Instance, weights: &CostWeights, placement: &Placement) -> Self {
        let mut state = Loading::new(inst);
        let mut forwarding_sum = 0.0;
        for (r, a) in placement.admitted() {
            state.place(inst, r, a.primary.mec, &a.primary.servers);
            state.place(inst, r, a.backup.mec, &a.backup.servers);
            forwarding_sum += forwarding(inst, r, a);
        }
        let mut chromosome = Chromosome {
            assignments: placement.assignments.clone(),
            state,
            forwarding_sum,
            fitness: 0.0,
            mecs: 0,
            servers: 0,
        };
        chromosome.refresh_fitness(weights);
        chromosome
    }

    pub fn fitness(&self) -> f64 {
        self.fitness
    }

    pub fn to_placement(&self) -> Placement {
        Placement {
            mode: Connectivity::Multi,
            protection: Protection::MecDisjoint,
            assignments: self.assignments.clone(),
        }
    }

    fn refresh_fitness(&mut self, weights: &CostWeights) {
        self.mecs = self.state.active_mecs() as u32;
        self.servers = self.state.total_active_servers() as u32;
        self.fitness = weights.alpha_mec * weights.mec_cost * f64::from(self.mecs)
            + weights.alpha_server * weights.server_cost * f64::from(self.servers)
            + weights.alpha_traffic * weights.traffic_cost * self.forwarding_sum;
    }

    fn content_hash(&self) -> u64 {
        let mut hasher = DefaultHasher::new();
        self.assignments.hash(&mut hasher);
        hasher.finish()
    }

    fn mec_of(&self, r: usize, backup: bool) -> Option<MecId> {
        self.assignments[r]
            .as_ref()
            .map(|a| if backup { a.backup.mec } else { a.primary.mec })
    }

    /// Checks whether the given slice of `r` can relocate to `dest` without
    /// breaking latency, anti-affinity, bandwidth or capacity; returns the
    /// FFD server assignment it would take there.
    fn plan_move(
        &self,
        inst: &Instance,
        r: usize,
        backup: bool,
        dest: MecId,
    ) -> Option<Vec<usize>> {
        let current = self.assignments[r].as_ref()?;
        let (slice, other) = if backup {
            (&current.backup, &current.primary)
        } else {
            (&current.primary, &current.backup)
        };
        if dest == slice.mec || dest == other.mec {
            return None;
        }
        let attachment = inst.attachment(r, backup, Connectivity::Multi);
        if !inst.latency_ok(r, attachment, dest) {
            return None;
        }
        let bw = inst.requests[r].service.bandwidth_mbps;
        if !self.state.bandwidth_fits(inst, dest, bw) {
            return None;
        }
        self.state.ffd_slice(inst, r, dest, &[])
    }

    fn commit_move(
        &mut self,
        inst: &Instance,
        weights: &CostWeights,
        r: usize,
        backup: bool,
        dest: MecId,
        servers: Vec<usize>,
    ) {
        let attachment = inst.attachment(r, backup, Connectivity::Multi);
        let assignment = self.assignments[r].as_mut().expect("planned move");
        let slice = if backup {
            &mut assignment.backup
        } else {
            &mut assignment.primary
        };
        let old_mec = slice.mec;
        let old_servers = std::mem::replace(&mut slice.servers, servers.clone());
        slice.mec = dest;
        self.forwarding_sum += inst.requests[r].service.bandwidth_mbps
            * (inst.delay_to_site(attachment, dest) - inst.delay_to_site(attachment, old_mec));
        self.state.remove(inst, r, old_mec, &old_servers);
        self.state.place(inst, r, dest, &servers);
        self.refresh_fitness(weights);
    }

    fn try_move(
        &mut self,
        inst: &Instance,
        weights: &CostWeights,
        r: usize,
        backup: bool,
        dest: MecId,
    ) -> bool {
        match self.plan_move(inst, r, backup, dest) {
            Some(servers) => {
                self.commit_move(inst, weights, r, backup, dest, servers);
                true
            }
            None => false,
        }
    }

    /// Swaps the primary and backup roles of request `r` when both latency
    /// budgets still hold. Server loads are unchanged: both slices carry the
    /// same VNF set, only the forwarding term moves.
    fn try_role_swap(&mut self, inst: &Instance, weights: &CostWeights, r: usize) -> bool {
        let Some(assignment) = self.assignments[r].as_ref() else {
            return false;
        };
        let (pm, bm) = (assignment.primary.mec, assignment.backup.mec);
        let primary_att = inst.attachment(r, false, Connectivity::Multi);
        let backup_att = inst.attachment(r, true, Connectivity::Multi);
        if !inst.latency_ok(r, primary_att, bm) || !inst.latency_ok(r, backup_att, pm) {
            return false;
        }
        let bw = inst.requests[r].service.bandwidth_mbps;
        let old_fw = inst.delay_to_site(primary_att, pm) + inst.delay_to_site(backup_att, bm);
        let new_fw = inst.delay_to_site(primary_att, bm) + inst.delay_to_site(backup_att, pm);
        let assignment = self.assignments[r].as_mut().unwrap();
        std::mem::swap(&mut assignment.primary, &mut assignment.backup);
        self.forwarding_sum += bw * (new_fw - old_fw);
        self.refresh_fitness(weights);
        true
    }
}

fn forwarding(inst: &Instance, r: usize, a: &RequestPlacement) -> f64 {
    let primary_att = inst.attachment(r, false, Connectivity::Multi);
    let backup_att = inst.attachment(r, true, Connectivity::Multi);
    inst.requests[r].service.bandwidth_mbps
        * (inst.delay_to_site(primary_att, a.primary.mec)
            + inst.delay_to_site(backup_att, a.backup.mec))
}

const INIT_REBUILD_ATTEMPTS: usize = 100;

/// Builds the initial population: the greedy solution plus `population - 1`
/// random feasible chromosomes (requests in latency order, a random
/// latency-feasible facility pair each, VNFs packed FFD onto active servers).
///
/// Every chromosome places exactly the set of requests the greedy seed
/// places, so fitness values are comparable across the population.
pub fn mga_init(
    inst: &Instance,
    weights: &CostWeights,
    population: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Chromosome>, SolveError> {
    let greedy = solve_greedy(inst, weights);
    let admitted: Vec<bool> = greedy.assignments.iter().map(|a| a.is_some()).collect();
    let order = latency_order(inst);

    let mut chromosomes = Vec::with_capacity(population);
    chromosomes.push(Chromosome::from_placement(inst, weights, &greedy));

    for _ in 1..population {
        let mut built = None;
        for _attempt in 0..INIT_REBUILD_ATTEMPTS {
            if let Some(c) = random_chromosome(inst, weights, &order, &admitted, rng) {
                built = Some(c);
                break;
            }
        }
        match built {
            Some(c) => chromosomes.push(c),
            None => {
                return Err(SolveError::InitExhausted {
                    attempts: INIT_REBUILD_ATTEMPTS,
                })
            }
        }
    }
    Ok(chromosomes)
}

fn random_chromosome(
    inst: &Instance,
    weights: &CostWeights,
    order: &[usize],
    admitted: &[bool],
    rng: &mut ChaCha8Rng,
) -> Option<Chromosome> {
    let mut placement = Placement::empty(
        inst.requests.len(),
        Connectivity::Multi,
        Protection::MecDisjoint,
    );
    let mut state = Loading::new(inst);
    for &r in order {
        if !admitted[r] {
            continue;
        }
        let bw = inst.requests[r].service.bandwidth_mbps;
        let mut pairs = candidate_pairs(inst, r, Connectivity::Multi);
        pairs.shuffle(rng);
        let mut placed = false;
        for (a, b) in pairs {
            if !state.bandwidth_fits(inst, a, bw) || !state.bandwidth_fits(inst, b, bw) {
                continue;
            }
            let Some(primary_servers) = state.ffd_slice(inst, r, a, &[]) else {
                continue;
            };
            let Some(backup_servers) = state.ffd_slice(inst, r, b, &[]) else {
                continue;
            };
            state.place(inst, r, a, &primary_servers);
            state.place(inst, r, b, &backup_servers);
            placement.assignments[r] = Some(RequestPlacement {
                primary: SliceAssignment { mec: a, servers: primary_servers },
                backup: SliceAssignment { mec: b, servers: backup_servers },
            });
            placed = true;
            break;
        }
        if !placed {
            return None;
        }
    }
    Some(Chromosome::from_placement(inst, weights, &placement))
}

/// Per-request recombination of two parents. With `m_a`/`m_b` the facilities
/// of parent 1's primary/backup and `m_c`/`m_d` those of parent 2:
///
/// - shared primary-1/backup-2 facility: parent 1's backup and parent 2's
///   primary trade places (both moves must stay feasible, else neither
///   applies);
/// - the symmetric case for shared backup-1/primary-2;
/// - fully matching or cross-matching pairs: each parent independently swaps
///   its primary and backup roles when the latency budgets allow.
///
/// Infeasible trades leave the gene unchanged, so children are always
/// feasible.
pub fn crossover(
    parent1: &Chromosome,
    parent2: &Chromosome,
    inst: &Instance,
    weights: &CostWeights,
) -> (Chromosome, Chromosome) {
    let mut c1 = parent1.clone();
    let mut c2 = parent2.clone();
    for r in 0..inst.requests.len() {
        let (Some(m_a), Some(m_b)) = (c1.mec_of(r, false), c1.mec_of(r, true)) else {
            continue;
        };
        let (Some(m_c), Some(m_d)) = (c2.mec_of(r, false), c2.mec_of(r, true)) else {
            continue;
        };
        if m_a == m_d && m_b != m_c {
            let plan1 = c1.plan_move(inst, r, true, m_c);
            let plan2 = c2.plan_move(inst, r, false, m_b);
            if let (Some(s1), Some(s2)) = (plan1, plan2) {
                c1.commit_move(inst, weights, r, true, m_c, s1);
                c2.commit_move(inst, weights, r, false, m_b, s2);
            }
        } else if m_a != m_d && m_b == m_c {
            let plan1 = c1.plan_move(inst, r, false, m_d);
            let plan2 = c2.plan_move(inst, r, true, m_a);
            if let (Some(s1), Some(s2)) = (plan1, plan2) {
                c1.commit_move(inst, weights, r, false, m_d, s1);
                c2.commit_move(inst, weights, r, true, m_a, s2);
            }
        } else if (m_a == m_d && m_b == m_c) || (m_a == m_c && m_b == m_d) {
            c1.try_role_swap(inst, weights, r);
            c2.try_role_swap(inst, weights, r);
        }
        // Remaining combinations (e.g. shared primaries with distinct
        // backups) have no defined trade and stay as they are.
    }
    (c1, c2)
}

/// Relocates one random request's slice to a random facility different from
/// both of its current ones: the primary if the move is feasible, else the
/// backup, else nothing.
pub fn mutate(
    child: &Chromosome,
    inst: &Instance,
    weights: &CostWeights,
    rng: &mut ChaCha8Rng,
) -> Chromosome {
    let mut mutated = child.clone();
    let placed: Vec<usize> = (0..inst.requests.len())
        .filter(|&r| mutated.assignments[r].is_some())
        .collect();
    if placed.is_empty() {
        return mutated;
    }
    let r = placed[rng.random_range(0..placed.len())];
    let m_a = mutated.mec_of(r, false).unwrap();
    let m_b = mutated.mec_of(r, true).unwrap();
    let others: Vec<MecId> = (0..inst.sites.len())
        .filter(|&m| m != m_a && m != m_b)
        .collect();
    if others.is_empty() {
        return mutated;
    }
    let m_c = others[rng.random_range(0..others.len())];
    if !mutated.try_move(inst, weights, r, false, m_c) {
        mutated.try_move(inst, weights, r, true, m_c);
    }
    mutated
}

fn sort_key(c: &Chromosome) -> (f64, u32, u32, u64) {
    (c.fitness, c.mecs, c.servers, c.content_hash())
}

fn sort_population(pop: &mut [Chromosome]) {
    pop.sort_by(|a, b| {
        let ka = sort_key(a);
        let kb = sort_key(b);
        ka.0.partial_cmp(&kb.0)
            .unwrap()
            .then(ka.1.cmp(&kb.1))
            .then(ka.2.cmp(&kb.2))
            .then(ka.3.cmp(&kb.3))
    });
}

/// Samples an index by linear rank weight: the best of `n` gets weight `n`,
/// the worst weight 1.
fn rank_select(rng: &mut ChaCha8Rng, n: usize) -> usize {
    let total = n * (n + 1) / 2;
    let mut draw = rng.random_range(0..total);
    for i in 0..n {
        let w = n - i;
        if draw < w {
            return i;
        }
        draw -= w;
    }
    n - 1
}

fn stats(generation: usize, pop: &[Chromosome]) -> GenStats {
    let best = pop.first().map_or(0.0, |c| c.fitness);
    let worst = pop.last().map_or(0.0, |c| c.fitness);
    let mean = pop.iter().map(|c| c.fitness).sum::<f64>() / pop.len().max(1) as f64;
    GenStats { generation, best, mean, worst }
}

/// Runs the full GA: seeded population, `generations` rounds of rank
/// selection, crossover, mutation and elitist survival of the best
/// `population` among the pooled parents and children.
pub fn solve_mga(
    inst: &Instance,
    weights: &CostWeights,
    cfg: &GaConfig,
) -> Result<MgaOutcome, SolveError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pop = mga_init(inst, weights, cfg.population, &mut rng)?;
    sort_population(&mut pop);

    let mut history = Vec::with_capacity(cfg.generations + 1);
    history.push(stats(0, &pop));

    for generation in 1..=cfg.generations {
        let mut pool = pop.clone();
        for _ in 0..cfg.population / 2 {
            let i = rank_select(&mut rng, pop.len());
            let j = rank_select(&mut rng, pop.len());
            let (c1, c2) = if rng.random::<f64>() <= cfg.crossover_threshold {
                crossover(&pop[i], &pop[j], inst, weights)
            } else {
                (pop[i].clone(), pop[j].clone())
            };
            for child in [c1, c2] {
                if rng.random::<f64>() <= cfg.mutation_threshold {
                    pool.push(mutate(&child, inst, weights, &mut rng));
                } else {
                    pool.push(child);
                }
            }
        }
        sort_population(&mut pool);
        pool.truncate(cfg.population);
        pop = pool;
        history.push(stats(generation, &pop));
    }

    // Decode the winner: slice relocations fragment server packings, so the
    // emitted placement compacts each facility onto its minimal server set
    // (facility pairs fix the other cost terms). The final cost can therefore
    // dip slightly below the last history entry.
    let best = &pop[0];
    let mut placement = best.to_placement();
    super::repack_min_servers(&mut placement, inst);
    let cost = crate::model::cost_unchecked(&placement, inst, weights);
    Ok(MgaOutcome { placement, cost, history })
}
