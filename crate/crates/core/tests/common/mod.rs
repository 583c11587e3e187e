//! Test-only oracles that share no code with the library's schedules.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Round id of each sensor for the offset-`j` schedule: the prologue is
/// round 0 (only when `j > 0`), then blocks of `k`.
pub fn round_ids(n: usize, k: usize, j: usize) -> Vec<usize> {
    (0..n)
        .map(|i| if i < j { 0 } else { 1 + (i - j) / k })
        .collect()
}

fn grouped(n: usize, k: usize, j: usize) -> Vec<Vec<usize>> {
    let ids = round_ids(n, k, j);
    let mut rounds: Vec<Vec<usize>> = Vec::new();
    let mut current = usize::MAX;
    for (i, id) in ids.into_iter().enumerate() {
        if id != current {
            rounds.push(Vec::new());
            current = id;
        }
        rounds.last_mut().unwrap().push(i);
    }
    rounds
}

/// Robot on the line that tracks position, odometer and cargo event by event.
pub struct LineRobot {
    pub pos: f64,
    pub travelled: f64,
    pub cargo: Vec<usize>,
    pub capacity: usize,
}

impl LineRobot {
    pub fn new(capacity: usize) -> Self {
        Self {
            pos: 0.0,
            travelled: 0.0,
            cargo: Vec::new(),
            capacity,
        }
    }

    pub fn go(&mut self, x: f64) {
        self.travelled += (x - self.pos).abs();
        self.pos = x;
    }

    pub fn pick(&mut self, sensor: usize) {
        self.cargo.push(sensor);
        assert!(self.cargo.len() <= self.capacity, "capacity exceeded");
    }

    pub fn drop_sensor(&mut self, sensor: usize) {
        let at = self
            .cargo
            .iter()
            .position(|&s| s == sensor)
            .expect("dropping a sensor not on board");
        self.cargo.remove(at);
    }
}

/// Event simulation of the offset-`j` line schedule. Returns the distance
/// and every sensor's final position.
pub fn simulate_line(xs: &[f64], targets: &[f64], k: usize, j: usize) -> (f64, Vec<f64>) {
    let mut robot = LineRobot::new(k);
    let mut finals = xs.to_vec();
    run_line_rounds(&mut robot, xs, targets, k, j, &mut finals);
    assert!(robot.cargo.is_empty());
    (robot.travelled, finals)
}

fn run_line_rounds(
    robot: &mut LineRobot,
    xs: &[f64],
    targets: &[f64],
    k: usize,
    j: usize,
    finals: &mut [f64],
) {
    for round in grouped(xs.len(), k, j) {
        for &i in &round {
            robot.go(xs[i]);
            robot.pick(i);
        }
        let back_to = robot.pos;
        let mut by_target = round.clone();
        by_target.sort_by(|&a, &b| targets[b].partial_cmp(&targets[a]).unwrap().then(b.cmp(&a)));
        for &i in &by_target {
            robot.go(targets[i]);
            robot.drop_sensor(i);
            finals[i] = targets[i];
        }
        robot.go(back_to);
    }
}

/// Per-round closed form `(Y_l - y0) + (max(P_l,Y_l) - Y_l) + (max(P_l,Y_l) - P_1) + |Y_l - P_1|`.
pub fn closed_form_line(xs: &[f64], targets: &[f64], k: usize, j: usize) -> f64 {
    let mut y0 = 0.0;
    let mut total = 0.0;
    for round in grouped(xs.len(), k, j) {
        let yl = xs[*round.last().unwrap()];
        let p1 = targets[round[0]];
        let pl = targets[*round.last().unwrap()];
        let peak = pl.max(yl);
        total += (yl - y0) + (peak - yl) + (peak - p1) + (yl - p1).abs();
        y0 = yl;
    }
    total
}

/// Robot on the plane restricted to axis-parallel moves.
pub struct PlaneRobot {
    pub pos: [f64; 2],
    pub travelled: f64,
    pub carried: usize,
    pub capacity: usize,
}

impl PlaneRobot {
    fn go(&mut self, to: [f64; 2]) {
        assert!(
            to[0] == self.pos[0] || to[1] == self.pos[1],
            "diagonal move {:?} -> {:?}",
            self.pos,
            to
        );
        self.travelled += (to[0] - self.pos[0]).abs() + (to[1] - self.pos[1]).abs();
        self.pos = to;
    }
}

pub struct PlaneOutcome {
    pub phase1: f64,
    pub return_leg: f64,
    pub phase2: f64,
    /// `(i1, i2)` at index `i2 * m + i1`.
    pub finals: Vec<[f64; 2]>,
}

impl PlaneOutcome {
    pub fn total(&self) -> f64 {
        self.phase1 + self.return_leg + self.phase2
    }
}

/// Event simulation of the two-phase grid schedule.
pub fn simulate_plane(
    xs: &[f64],
    ys: &[f64],
    tx: &[f64],
    ty: &[f64],
    k: usize,
    j1: usize,
    j2: usize,
) -> PlaneOutcome {
    let m = xs.len();
    let mut finals: Vec<[f64; 2]> = (0..m * m).map(|idx| [xs[idx % m], ys[idx / m]]).collect();
    let mut robot = PlaneRobot {
        pos: [0.0, 0.0],
        travelled: 0.0,
        carried: 0,
        capacity: k,
    };

    for i2 in 0..m {
        let y = ys[i2];
        robot.go([0.0, y]);
        for round in grouped(m, k, j2) {
            for &i1 in &round {
                robot.go([finals[i2 * m + i1][0], y]);
                robot.carried += 1;
                assert!(robot.carried <= robot.capacity);
            }
            let back = robot.pos;
            for &i1 in round.iter().rev() {
                robot.go([tx[i1], y]);
                finals[i2 * m + i1][0] = tx[i1];
                robot.carried -= 1;
            }
            robot.go(back);
        }
        robot.go([0.0, y]);
    }
    let phase1 = robot.travelled;

    robot.go([0.0, 0.0]);
    let return_leg = robot.travelled - phase1;

    for i1 in 0..m {
        let x = tx[i1];
        robot.go([x, 0.0]);
        for round in grouped(m, k, j1) {
            for &i2 in &round {
                robot.go([x, finals[i2 * m + i1][1]]);
                robot.carried += 1;
                assert!(robot.carried <= robot.capacity);
            }
            let back = robot.pos;
            for &i2 in round.iter().rev() {
                robot.go([x, ty[i2]]);
                finals[i2 * m + i1][1] = ty[i2];
                robot.carried -= 1;
            }
            robot.go(back);
        }
        robot.go([x, 0.0]);
    }
    let phase2 = robot.travelled - phase1 - return_leg;
    assert_eq!(robot.carried, 0);
    PlaneOutcome {
        phase1,
        return_leg,
        phase2,
        finals,
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sorted positions: exponential gaps with a random rate.
pub fn random_sorted<R: Rng>(rng: &mut R, n: usize, start: f64) -> Vec<f64> {
    let rate = rng.random_range(0.5..20.0);
    let mut at = start;
    (0..n)
        .map(|_| {
            at += -(1.0 - rng.random::<f64>()).ln() / rate;
            at
        })
        .collect()
}

/// Sorted targets spread around `[0, span]`, including ties and moves in
/// both directions.
pub fn random_targets<R: Rng>(rng: &mut R, n: usize, span: f64) -> Vec<f64> {
    let hi = span * rng.random_range(0.2..2.0) + 0.1;
    let mut t: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..hi)).collect();
    if n > 1 && rng.random_bool(0.1) {
        t[1] = t[0];
    }
    t.sort_by(|a, b| a.partial_cmp(b).unwrap());
    t
}
