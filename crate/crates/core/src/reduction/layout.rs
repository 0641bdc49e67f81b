//! Placement of gadget footprints on a common canvas and wire routing.
//!
//! Wires run on the coarse lattice of even coordinates: every other cell of
//! a wire is a station (initially empty) and the cells between stations hold
//! pegs, so a peg arriving at one end travels to the other by jumps. Ports of
//! every placed footprint must sit on that lattice. Wires keep clear of each
//! other and of foreign cells so that no unintended jump can couple them.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::Position;
use crate::reduction::gadget::{Footprint, Port, PortKind, Transform};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LayoutFailure {
    #[error("net '{net}': no route from {from} to {to}")]
    NoRoute { net: String, from: Position, to: Position },
    #[error("'{instance}' overlaps or touches existing cells at {at}")]
    Overlap { instance: String, at: Position },
    #[error("'{instance}': port {port} at {at} is off the even lattice")]
    OffLattice {
        instance: String,
        port: String,
        at: Position,
    },
    #[error("net '{net}': terminal {at} is not free")]
    BlockedTerminal { net: String, at: Position },
    #[error("net '{net}': {reason}")]
    Unroutable { net: String, reason: String },
}

/// A footprint placed on the canvas.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub label: String,
    pub gadget: String,
    pub transform: Transform,
    pub offset: Position,
    pub ports: BTreeMap<String, Position>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutedWire {
    pub net: String,
    /// Stations from source to sink, both ends included.
    pub stations: Vec<Position>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Owner {
    Placement(usize),
    Wire(usize),
    Terminal,
}

const STEPS: [(i32, i32); 4] = [(0, -1), (1, 0), (-1, 0), (0, 1)];

fn on_lattice(p: Position) -> bool {
    p.x.rem_euclid(2) == 0 && p.y.rem_euclid(2) == 0
}

#[derive(Clone, Debug, Default)]
pub struct Canvas {
    cells: BTreeMap<Position, (bool, Owner)>,
    placements: Vec<Placement>,
    wires: Vec<RoutedWire>,
    ports: Vec<Port>,
}

impl Canvas {
    pub fn new() -> Self {
        Canvas::default()
    }

    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    pub fn wires(&self) -> &[RoutedWire] {
        &self.wires
    }

    pub fn is_cell(&self, p: Position) -> bool {
        self.cells.contains_key(&p)
    }

    /// Places `fp` under `t` and then shifts it by `offset`. The new cells
    /// may not touch existing ones, even diagonally.
    pub fn place(
        &mut self,
        label: &str,
        gadget: &str,
        fp: &Footprint,
        t: Transform,
        offset: (i32, i32),
    ) -> Result<usize, LayoutFailure> {
        let moved = fp.transformed(t, offset.0, offset.1);
        for p in &moved.ports {
            if !on_lattice(p.pos) {
                return Err(LayoutFailure::OffLattice {
                    instance: label.to_string(),
                    port: p.name.clone(),
                    at: p.pos,
                });
            }
        }
        for &p in moved.cells.keys() {
            for dx in -1..=1 {
                for dy in -1..=1 {
                    if self.is_cell(p.offset(dx, dy)) {
                        return Err(LayoutFailure::Overlap {
                            instance: label.to_string(),
                            at: p,
                        });
                    }
                }
            }
        }
        let id = self.placements.len();
        for (&p, &peg) in &moved.cells {
            self.cells.insert(p, (peg, Owner::Placement(id)));
        }
        self.placements.push(Placement {
            label: label.to_string(),
            gadget: gadget.to_string(),
            transform: t,
            offset: Position::new(offset.0, offset.1),
            ports: moved.ports.iter().map(|p| (p.name.clone(), p.pos)).collect(),
        });
        Ok(id)
    }

    pub fn port(&self, placement: usize, name: &str) -> Position {
        *self.placements[placement]
            .ports
            .get(name)
            .unwrap_or_else(|| panic!("{} has no port {name}", self.placements[placement].label))
    }

    fn clear(&self, p: Position) -> bool {
        !self.is_cell(p)
    }

    fn station_free(&self, p: Position) -> bool {
        self.clear(p) && STEPS.iter().all(|&(dx, dy)| self.clear(p.offset(dx, dy)))
    }

    fn link_free(&self, mid: Position, dx: i32, dy: i32) -> bool {
        self.clear(mid) && self.clear(mid.offset(dy, dx)) && self.clear(mid.offset(-dy, -dx))
    }

    fn bounding(&self, extra: &[Position], pad: i32) -> (Position, Position) {
        let pts = self.cells.keys().chain(extra.iter());
        let (mut lo, mut hi) = (Position::new(i32::MAX, i32::MAX), Position::new(i32::MIN, i32::MIN));
        for p in pts {
            lo = Position::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Position::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let even = |v: i32| v - v.rem_euclid(2);
        (
            Position::new(even(lo.x) - pad, even(lo.y) - pad),
            Position::new(even(hi.x) + pad, even(hi.y) + pad),
        )
    }

    /// Shortest station path between two existing lattice cells.
    fn search(&self, from: Position, to: Position, avoid: &HashSet<Position>) -> Option<Vec<Position>> {
        let (lo, hi) = self.bounding(&[from, to], 8);
        let mut prev: HashMap<Position, Position> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        prev.insert(from, from);
        while let Some(u) = queue.pop_front() {
            for &(dx, dy) in &STEPS {
                let v = u.offset(2 * dx, 2 * dy);
                if v.x < lo.x || v.x > hi.x || v.y < lo.y || v.y > hi.y || prev.contains_key(&v) {
                    continue;
                }
                if !self.link_free(u.offset(dx, dy), dx, dy) {
                    continue;
                }
                if v != to && (avoid.contains(&v) || !self.station_free(v)) {
                    continue;
                }
                prev.insert(v, u);
                if v == to {
                    let mut path = vec![to];
                    let mut w = to;
                    while w != from {
                        w = prev[&w];
                        path.push(w);
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(v);
            }
        }
        None
    }

    /// Routes a wire from a lattice cell on the canvas to `to`, passing
    /// through the given stations in order. If `to` is not yet a cell it
    /// becomes the open end of the wire.
    pub fn route_via(
        &mut self,
        net: &str,
        from: Position,
        via: &[Position],
        to: Position,
    ) -> Result<(), LayoutFailure> {
        let fail = |a: Position, b: Position| LayoutFailure::NoRoute {
            net: net.to_string(),
            from: a,
            to: b,
        };
        if !on_lattice(from) || !on_lattice(to) {
            return Err(LayoutFailure::Unroutable {
                net: net.to_string(),
                reason: "endpoint off the even lattice".into(),
            });
        }
        let fresh_end = !self.is_cell(to);
        if fresh_end && !self.station_free(to) {
            return Err(LayoutFailure::BlockedTerminal {
                net: net.to_string(),
                at: to,
            });
        }
        let mut points = vec![from];
        points.extend_from_slice(via);
        points.push(to);
        let mut stations = vec![from];
        // earlier legs stay reserved while later legs are searched
        let mut reserved: HashSet<Position> = HashSet::new();
        for w in points.windows(2) {
            let (a, b) = (w[0], w[1]);
            let leg = self.search(a, b, &reserved).ok_or_else(|| fail(a, b))?;
            for &p in &leg[1..] {
                reserved.insert(p);
                stations.push(p);
            }
        }
        if stations[1..stations.len() - 1]
            .iter()
            .any(|p| stations.iter().filter(|q| *q == p).count() > 1)
        {
            return Err(fail(from, to));
        }
        let id = self.wires.len();
        for w in stations.windows(2) {
            let mid = Position::new((w[0].x + w[1].x) / 2, (w[0].y + w[1].y) / 2);
            self.cells.insert(mid, (true, Owner::Wire(id)));
        }
        for &s in &stations[1..stations.len() - 1] {
            self.cells.insert(s, (false, Owner::Wire(id)));
        }
        if fresh_end {
            self.cells.insert(to, (false, Owner::Wire(id)));
        }
        self.wires.push(RoutedWire {
            net: net.to_string(),
            stations,
        });
        Ok(())
    }

    pub fn route(&mut self, net: &str, from: Position, to: Position) -> Result<(), LayoutFailure> {
        self.route_via(net, from, &[], to)
    }

    /// Adds an empty lattice cell at `at` and declares it a port of the
    /// canvas.
    pub fn terminal(&mut self, name: &str, kind: PortKind, at: Position) -> Result<Position, LayoutFailure> {
        if !on_lattice(at) || !self.station_free(at) {
            return Err(LayoutFailure::BlockedTerminal {
                net: name.to_string(),
                at,
            });
        }
        self.cells.insert(at, (false, Owner::Terminal));
        self.ports.push(Port {
            name: name.to_string(),
            pos: at,
            kind,
        });
        Ok(at)
    }

    /// Creates a terminal at `at` and wires it to `port`.
    pub fn expose(
        &mut self,
        name: &str,
        kind: PortKind,
        port: Position,
        via: &[Position],
        at: Position,
    ) -> Result<(), LayoutFailure> {
        self.terminal(name, kind, at)?;
        match kind {
            PortKind::Input => self.route_via(name, at, via, port),
            PortKind::Output => self.route_via(name, port, via, at),
        }
    }

    /// Declares an existing cell as a canvas port.
    pub fn declare(&mut self, name: &str, kind: PortKind, at: Position) {
        self.ports.push(Port {
            name: name.to_string(),
            pos: at,
            kind,
        });
    }

    pub fn owner_label(&self, p: Position) -> Option<String> {
        self.cells.get(&p).map(|(_, o)| match *o {
            Owner::Placement(i) => self.placements[i].label.clone(),
            Owner::Wire(i) => format!("wire:{}", self.wires[i].net),
            Owner::Terminal => "terminal".to_string(),
        })
    }

    pub fn footprint(&self) -> Footprint {
        Footprint {
            cells: self.cells.iter().map(|(&p, &(peg, _))| (p, peg)).collect(),
            ports: self.ports.clone(),
        }
    }
}
