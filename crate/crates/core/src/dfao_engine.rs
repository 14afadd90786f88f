//! Deterministic finite automata with output over small integer alphabets.
//!
//! Symbols are indices 0..sigma. Over base-p words digits are 0..p-1 and the
//! radix mark is p (see [`crate::base_p_codec::Sym::index`]). Outputs are u32
//! labels: booleans as 0/1, field elements as their codes.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::base_p_codec::Word;
use crate::error::{Error, Result};

pub const REVERSE_CAP: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dfao {
    pub p: u32,
    pub alphabet: Vec<String>,
    pub states: usize,
    pub delta: Vec<Vec<u32>>,
    pub q0: u32,
    pub outputs: Vec<u32>,
}

/// Alphabet labels for plain digits, or digits plus the radix mark.
pub fn digit_alphabet(p: u32, with_radix: bool) -> Vec<String> {
    let mut a: Vec<String> = (0..p).map(|d| if d < 10 { d.to_string() } else { format!("[{}]", d) }).collect();
    if with_radix {
        a.push(".".into());
    }
    a
}

pub fn product_alphabet(a: &[String], b: &[String]) -> Vec<String> {
    a.iter().flat_map(|x| b.iter().map(move |y| format!("({},{})", x, y))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WellOrdered {
    Certified,
    /// Words prefix·cycle^n·tail are accepted for all n and strictly decrease in value.
    NotWellOrdered { prefix: Word, cycle: Word, tail: Word },
    Inconclusive,
}

impl Dfao {
    pub fn new(p: u32, alphabet: Vec<String>, delta: Vec<Vec<u32>>, q0: u32, outputs: Vec<u32>) -> Result<Dfao> {
        let m = Dfao { p, alphabet, states: delta.len(), delta, q0, outputs };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let s = self.sigma();
        if self.delta.len() != self.states || self.outputs.len() != self.states {
            return Err(Error::user("state count does not match transition or output table"));
        }
        if self.q0 as usize >= self.states {
            return Err(Error::user("initial state out of range"));
        }
        for row in &self.delta {
            if row.len() != s || row.iter().any(|&t| t as usize >= self.states) {
                return Err(Error::user("transition table is not total"));
            }
        }
        Ok(())
    }

    pub fn sigma(&self) -> usize {
        self.alphabet.len()
    }

    /// Single-state automaton with constant output.
    pub fn constant(p: u32, alphabet: Vec<String>, out: u32) -> Dfao {
        let s = alphabet.len();
        Dfao { p, alphabet, states: 1, delta: vec![vec![0; s]], q0: 0, outputs: vec![out] }
    }

    #[inline]
    pub fn step(&self, q: u32, a: usize) -> u32 {
        self.delta[q as usize][a]
    }

    pub fn state_after(&self, word: &[usize]) -> Result<u32> {
        let mut q = self.q0;
        for (i, &a) in word.iter().enumerate() {
            if a >= self.sigma() {
                return Err(Error::user(format!("symbol {} at position {} outside alphabet", a, i)));
            }
            q = self.step(q, a);
        }
        Ok(q)
    }

    pub fn run(&self, word: &[usize]) -> Result<u32> {
        Ok(self.outputs[self.state_after(word)? as usize])
    }

    pub fn run_word(&self, w: &Word) -> Result<u32> {
        self.run(&w.indices())
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        self.run(word).map(|o| o != 0).unwrap_or(false)
    }

    pub fn map_outputs(&self, f: impl Fn(u32) -> u32) -> Dfao {
        Dfao { outputs: self.outputs.iter().map(|&o| f(o)).collect(), ..self.clone() }
    }

    pub fn complement(&self) -> Dfao {
        self.map_outputs(|o| (o == 0) as u32)
    }

    fn reachable(&self) -> Vec<u32> {
        let mut order = vec![self.q0];
        let mut seen = vec![false; self.states];
        seen[self.q0 as usize] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for &t in &self.delta[q as usize] {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        order
    }

    /// Partition refinement starting from the output partition, then canonical BFS numbering.
    pub fn minimize(&self) -> Dfao {
        let reach = self.reachable();
        let mut idx = vec![u32::MAX; self.states];
        for (i, &q) in reach.iter().enumerate() {
            idx[q as usize] = i as u32;
        }
        let n = reach.len();
        let sigma = self.sigma();
        let delta: Vec<Vec<u32>> = reach.iter().map(|&q| self.delta[q as usize].iter().map(|&t| idx[t as usize]).collect()).collect();
        let outputs: Vec<u32> = reach.iter().map(|&q| self.outputs[q as usize]).collect();

        let mut class = vec![0u32; n];
        let mut count = {
            let mut ids: HashMap<u32, u32> = HashMap::new();
            for q in 0..n {
                let l = ids.len() as u32;
                class[q] = *ids.entry(outputs[q]).or_insert(l);
            }
            ids.len()
        };
        loop {
            let mut ids: HashMap<Vec<u32>, u32> = HashMap::with_capacity(count * 2);
            let mut next = vec![0u32; n];
            let mut sig = Vec::with_capacity(sigma + 1);
            for q in 0..n {
                sig.clear();
                sig.push(class[q]);
                sig.extend(delta[q].iter().map(|&t| class[t as usize]));
                let l = ids.len() as u32;
                next[q] = match ids.get(&sig) {
                    Some(&c) => c,
                    None => {
                        ids.insert(sig.clone(), l);
                        l
                    }
                };
            }
            let new_count = ids.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        // Canonical numbering by BFS from the initial class with digit-ordered edges.
        let mut rep = vec![usize::MAX; count];
        for q in 0..n {
            if rep[class[q] as usize] == usize::MAX {
                rep[class[q] as usize] = q;
            }
        }
        let mut num = vec![u32::MAX; count];
        let mut order = vec![class[0]];
        num[class[0] as usize] = 0;
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            for a in 0..sigma {
                let t = class[delta[rep[c as usize]][a] as usize];
                if num[t as usize] == u32::MAX {
                    num[t as usize] = order.len() as u32;
                    order.push(t);
                }
            }
            i += 1;
        }
        let new_delta = order.iter().map(|&c| (0..sigma).map(|a| num[class[delta[rep[c as usize]][a] as usize] as usize]).collect()).collect();
        let new_out = order.iter().map(|&c| outputs[rep[c as usize]]).collect();
        Dfao { p: self.p, alphabet: self.alphabet.clone(), states: order.len(), delta: new_delta, q0: 0, outputs: new_out }
    }

    /// Reachable part of the synchronous product.
    pub fn product(&self, o: &Dfao, combine: impl Fn(u32, u32) -> u32) -> Result<Dfao> {
        if self.alphabet != o.alphabet {
            return Err(Error::user("alphabet mismatch in product"));
        }
        let sigma = self.sigma();
        let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs = vec![(self.q0, o.q0)];
        ids.insert((self.q0, o.q0), 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (a, b) = pairs[i];
            let row = (0..sigma)
                .map(|s| {
                    let t = (self.step(a, s), o.step(b, s));
                    let l = pairs.len() as u32;
                    *ids.entry(t).or_insert_with(|| {
                        pairs.push(t);
                        l
                    })
                })
                .collect();
            delta.push(row);
            i += 1;
        }
        let outputs = pairs.iter().map(|&(a, b)| combine(self.outputs[a as usize], o.outputs[b as usize])).collect();
        Ok(Dfao { p: self.p, alphabet: self.alphabet.clone(), states: pairs.len(), delta, q0: 0, outputs })
    }

    /// f'(w) = f(rev w). States are output vectors indexed by the original states.
    pub fn reverse_function(&self) -> Result<Dfao> {
        self.reverse_function_capped(REVERSE_CAP)
    }

    pub fn reverse_function_capped(&self, cap: usize) -> Result<Dfao> {
        let sigma = self.sigma();
        let start: Vec<u32> = self.outputs.clone();
        let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
        ids.insert(start.clone(), 0);
        let mut vecs = vec![start];
        let mut delta = Vec::new();
        let mut i = 0;
        while i < vecs.len() {
            let mut row = Vec::with_capacity(sigma);
            for a in 0..sigma {
                let nv: Vec<u32> = (0..self.states).map(|q| vecs[i][self.delta[q][a] as usize]).collect();
                let id = match ids.get(&nv) {
                    Some(&id) => id,
                    None => {
                        if vecs.len() >= cap {
                            return Err(Error::resource("reversal subset construction", cap));
                        }
                        let id = vecs.len() as u32;
                        ids.insert(nv.clone(), id);
                        vecs.push(nv);
                        id
                    }
                };
                row.push(id);
            }
            delta.push(row);
            i += 1;
        }
        let outputs = vecs.iter().map(|v| v[self.q0 as usize]).collect();
        Ok(Dfao { p: self.p, alphabet: self.alphabet.clone(), states: vecs.len(), delta, q0: 0, outputs })
    }

    /// Accepts rev(s) for every accepted s.
    pub fn reverse_language(&self) -> Result<Dfao> {
        if self.outputs.iter().any(|&o| o > 1) {
            return Err(Error::user("reverse_language needs boolean outputs"));
        }
        Ok(self.reverse_function()?.minimize())
    }

    /// Over Σ×Σ′ (index a·|Σ′| + b), accepts s iff every same-length lift of s is accepted.
    pub fn project_forall(&self, sigma1: usize, sigma2: usize, alphabet: Vec<String>) -> Result<Dfao> {
        if sigma1 * sigma2 != self.sigma() || alphabet.len() != sigma1 {
            return Err(Error::user("alphabet is not a product of the given factors"));
        }
        if self.outputs.iter().any(|&o| o > 1) {
            return Err(Error::user("project_forall needs boolean outputs"));
        }
        let bad = self.complement();
        // Subset construction for the image of the bad language.
        let start = vec![bad.q0];
        let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
        ids.insert(start.clone(), 0);
        let mut sets = vec![start];
        let mut delta = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            let mut row = Vec::with_capacity(sigma1);
            for a in 0..sigma1 {
                let mut ns: Vec<u32> = sets[i].iter().flat_map(|&q| (0..sigma2).map(move |b| (q, a * sigma2 + b))).map(|(q, s)| bad.step(q, s)).collect();
                ns.sort_unstable();
                ns.dedup();
                let id = match ids.get(&ns) {
                    Some(&id) => id,
                    None => {
                        if sets.len() >= REVERSE_CAP {
                            return Err(Error::resource("projection subset construction", REVERSE_CAP));
                        }
                        let id = sets.len() as u32;
                        ids.insert(ns.clone(), id);
                        sets.push(ns);
                        id
                    }
                };
                row.push(id);
            }
            delta.push(row);
            i += 1;
        }
        let outputs = sets.iter().map(|s| (!s.iter().any(|&q| bad.outputs[q as usize] != 0)) as u32).collect();
        Ok(Dfao { p: self.p, alphabet, states: sets.len(), delta, q0: 0, outputs }.minimize())
    }

    /// Shortest word on which the two automata disagree, if any.
    pub fn difference_witness(&self, o: &Dfao) -> Result<Option<Vec<usize>>> {
        if self.alphabet != o.alphabet {
            return Err(Error::user("alphabet mismatch"));
        }
        let mut prev: HashMap<(u32, u32), Option<((u32, u32), usize)>> = HashMap::new();
        let start = (self.q0, o.q0);
        prev.insert(start, None);
        let mut queue = VecDeque::from([start]);
        while let Some((a, b)) = queue.pop_front() {
            if self.outputs[a as usize] != o.outputs[b as usize] {
                let mut word = Vec::new();
                let mut cur = (a, b);
                while let Some(Some((pp, s))) = prev.get(&cur) {
                    word.push(*s);
                    cur = *pp;
                }
                word.reverse();
                return Ok(Some(word));
            }
            for s in 0..self.sigma() {
                let t = (self.step(a, s), o.step(b, s));
                if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(t) {
                    e.insert(Some(((a, b), s)));
                    queue.push_back(t);
                }
            }
        }
        Ok(None)
    }

    pub fn equivalent(&self, o: &Dfao) -> Result<bool> {
        Ok(self.difference_witness(o)?.is_none())
    }

    pub fn is_empty_language(&self) -> bool {
        self.reachable().iter().all(|&q| self.outputs[q as usize] == 0)
    }

    /// All words of length ≤ max_len with nonzero output, in length-lexicographic order.
    pub fn accepted_words(&self, max_len: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut layer: Vec<(Vec<usize>, u32)> = vec![(Vec::new(), self.q0)];
        for len in 0..=max_len {
            for (w, q) in &layer {
                if self.outputs[*q as usize] != 0 {
                    out.push(w.clone());
                }
            }
            if len == max_len {
                break;
            }
            layer = layer
                .iter()
                .flat_map(|(w, q)| {
                    (0..self.sigma()).map(move |a| {
                        let mut w2 = w.clone();
                        w2.push(a);
                        (w2, self.step(*q, a))
                    })
                })
                .collect();
        }
        out
    }

    /// Three-valued well-ordering analysis of ‖L‖ for L ⊆ L_p.
    pub fn well_ordered_check(&self) -> Result<WellOrdered> {
        let p = self.p;
        if self.sigma() != p as usize + 1 {
            return Err(Error::user("well_ordered_check needs the alphabet of digits plus the radix mark"));
        }
        let lp = canonical_lp(p);
        let outside = self.product(&lp, |a, b| (a != 0 && b == 0) as u32)?;
        if !outside.is_empty_language() {
            return Err(Error::user("language is not contained in canonical L_p"));
        }
        let radix = p as usize;
        let n = self.states;
        // Co-accessible states.
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        for q in 0..n {
            for &t in &self.delta[q] {
                rev[t as usize].push(q as u32);
            }
        }
        let mut coacc = vec![false; n];
        let mut stack: Vec<u32> = (0..n as u32).filter(|&q| self.outputs[q as usize] != 0).collect();
        for &q in &stack {
            coacc[q as usize] = true;
        }
        while let Some(q) = stack.pop() {
            for &r in &rev[q as usize] {
                if !coacc[r as usize] {
                    coacc[r as usize] = true;
                    stack.push(r);
                }
            }
        }
        // States after the mark, with a shortest access word.
        let mut access: HashMap<u32, Vec<usize>> = HashMap::new();
        let mut pre: HashMap<u32, Vec<usize>> = HashMap::new();
        pre.insert(self.q0, Vec::new());
        let mut queue = VecDeque::from([self.q0]);
        while let Some(q) = queue.pop_front() {
            let w = pre[&q].clone();
            for a in 0..p as usize {
                let t = self.step(q, a);
                if let std::collections::hash_map::Entry::Vacant(e) = pre.entry(t) {
                    let mut w2 = w.clone();
                    w2.push(a);
                    e.insert(w2);
                    queue.push_back(t);
                }
            }
            let t = self.step(q, radix);
            if coacc[t as usize] && !access.contains_key(&t) {
                let mut w2 = w.clone();
                w2.push(radix);
                access.insert(t, w2);
            }
        }
        let mut queue: VecDeque<u32> = {
            let mut v: Vec<u32> = access.keys().copied().collect();
            v.sort_unstable();
            v.into()
        };
        while let Some(q) = queue.pop_front() {
            let w = access[&q].clone();
            for a in 0..p as usize {
                let t = self.step(q, a);
                if coacc[t as usize] && !access.contains_key(&t) {
                    let mut w2 = w.clone();
                    w2.push(a);
                    access.insert(t, w2);
                    queue.push_back(t);
                }
            }
        }
        let mut useful: Vec<u32> = access.keys().copied().collect();
        useful.sort_unstable();
        let in_s = |q: u32| access.contains_key(&q);

        // Decreasing chain search: a cycle c at q and an accepted tail w with w0^ω > c^ω.
        for &q in &useful {
            let Some(cycle) = self.shortest_cycle(q, p, &in_s) else { continue };
            if let Some(tail) = self.tail_above(q, &cycle, p) {
                let mk = |v: &[usize]| Word { p, syms: v.iter().map(|&i| crate::base_p_codec::Sym::from_index(i, p)).collect() };
                return Ok(WellOrdered::NotWellOrdered { prefix: mk(&access[&q]), cycle: mk(&cycle), tail: mk(&tail) });
            }
        }
        // Every strongly connected piece must be a single simple cycle.
        let comps = self.scc_within(&useful, p, &in_s);
        for comp in comps {
            let set: std::collections::HashSet<u32> = comp.iter().copied().collect();
            let edges: usize = comp.iter().map(|&q| (0..p as usize).filter(|&a| set.contains(&self.step(q, a))).count()).sum();
            if edges > comp.len() {
                return Ok(WellOrdered::Inconclusive);
            }
        }
        Ok(WellOrdered::Certified)
    }

    fn shortest_cycle(&self, q: u32, p: u32, in_s: &dyn Fn(u32) -> bool) -> Option<Vec<usize>> {
        let mut prev: HashMap<u32, (u32, usize)> = HashMap::new();
        let mut queue = VecDeque::new();
        for a in 0..p as usize {
            let t = self.step(q, a);
            if t == q {
                return Some(vec![a]);
            }
            if in_s(t) && !prev.contains_key(&t) {
                prev.insert(t, (q, a));
                queue.push_back(t);
            }
        }
        while let Some(r) = queue.pop_front() {
            for a in 0..p as usize {
                let t = self.step(r, a);
                if t == q {
                    let mut w = vec![a];
                    let mut cur = r;
                    while cur != q {
                        let (pp, s) = prev[&cur];
                        w.push(s);
                        cur = pp;
                    }
                    w.reverse();
                    return Some(w);
                }
                if in_s(t) && !prev.contains_key(&t) {
                    prev.insert(t, (r, a));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// An accepted word w from q with w·0^ω lexicographically above cycle^ω.
    fn tail_above(&self, q: u32, cycle: &[usize], p: u32) -> Option<Vec<usize>> {
        let l = cycle.len();
        // Tracker states: (automaton state, position in cycle, already greater).
        let mut prev: HashMap<(u32, usize, bool), Option<((u32, usize, bool), usize)>> = HashMap::new();
        let start = (q, 0usize, false);
        prev.insert(start, None);
        let mut queue = VecDeque::from([start]);
        while let Some(st @ (r, i, gt)) = queue.pop_front() {
            if gt && self.outputs[r as usize] != 0 {
                let mut w = Vec::new();
                let mut cur = st;
                while let Some(Some((pp, a))) = prev.get(&cur) {
                    w.push(*a);
                    cur = *pp;
                }
                w.reverse();
                return Some(w);
            }
            for a in 0..p as usize {
                if !gt && a < cycle[i] {
                    continue;
                }
                let next_gt = gt || a > cycle[i];
                let t = (self.step(r, a), (i + 1) % l, next_gt);
                if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(t) {
                    e.insert(Some((st, a)));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// Strongly connected components (Tarjan) of the digit-edge graph restricted to `nodes`.
    fn scc_within(&self, nodes: &[u32], p: u32, in_s: &dyn Fn(u32) -> bool) -> Vec<Vec<u32>> {
        let mut index: HashMap<u32, usize> = HashMap::new();
        let mut low: HashMap<u32, usize> = HashMap::new();
        let mut on_stack: std::collections::HashSet<u32> = Default::default();
        let mut stack = Vec::new();
        let mut comps = Vec::new();
        let mut counter = 0;
        for &root in nodes {
            if index.contains_key(&root) {
                continue;
            }
            // Iterative Tarjan: frames of (node, next edge).
            let mut frames = vec![(root, 0usize)];
            index.insert(root, counter);
            low.insert(root, counter);
            counter += 1;
            stack.push(root);
            on_stack.insert(root);
            while let Some(&mut (v, ref mut ei)) = frames.last_mut() {
                if *ei < p as usize {
                    let w = self.step(v, *ei);
                    *ei += 1;
                    if !in_s(w) {
                        continue;
                    }
                    if let std::collections::hash_map::Entry::Vacant(e) = index.entry(w) {
                        e.insert(counter);
                        low.insert(w, counter);
                        counter += 1;
                        stack.push(w);
                        on_stack.insert(w);
                        frames.push((w, 0));
                    } else if on_stack.contains(&w) {
                        let lw = index[&w];
                        let lv = low.get_mut(&v).unwrap();
                        *lv = (*lv).min(lw);
                    }
                } else {
                    frames.pop();
                    if let Some(&(u, _)) = frames.last() {
                        let lv = low[&v];
                        let lu = low.get_mut(&u).unwrap();
                        *lu = (*lu).min(lv);
                    }
                    if low[&v] == index[&v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack.remove(&w);
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comps.push(comp);
                    }
                }
            }
        }
        comps
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("dfao serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Dfao> {
        let m: Dfao = serde_json::from_value(v.clone()).map_err(|e| Error::user(format!("bad automaton JSON: {}", e)))?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph dfao {\n  rankdir=LR;\n  start [shape=point];\n");
        for q in 0..self.states {
            let _ = writeln!(s, "  q{} [label=\"{}/{}\"];", q, q, self.outputs[q]);
        }
        let _ = writeln!(s, "  start -> q{};", self.q0);
        for q in 0..self.states {
            // Group parallel edges into one labelled arrow.
            let mut by_target: Vec<(u32, Vec<&str>)> = Vec::new();
            for (a, &t) in self.delta[q].iter().enumerate() {
                match by_target.iter_mut().find(|(x, _)| *x == t) {
                    Some((_, v)) => v.push(&self.alphabet[a]),
                    None => by_target.push((t, vec![&self.alphabet[a]])),
                }
            }
            for (t, labels) in by_target {
                let _ = writeln!(s, "  q{} -> q{} [label=\"{}\"];", q, t, labels.join(","));
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Membership in canonical L_p over digits plus the radix mark.
pub fn canonical_lp(p: u32) -> Dfao {
    // 0 start, 1 integer digits, 2 after mark ending nonzero or empty, 3 after mark ending in zero, 4 dead
    let r = p as usize;
    let mut delta = vec![vec![4u32; r + 1]; 5];
    for d in 1..r {
        delta[0][d] = 1;
        delta[1][d] = 1;
        delta[2][d] = 2;
        delta[3][d] = 2;
    }
    delta[1][0] = 1;
    delta[0][0] = 4;
    delta[2][0] = 3;
    delta[3][0] = 3;
    delta[0][r] = 2;
    delta[1][r] = 2;
    Dfao { p, alphabet: digit_alphabet(p, true), states: 5, delta, q0: 0, outputs: vec![0, 0, 1, 0, 0] }
}

/// Membership in L_p^0 (no leading zero) over plain digits.
pub fn canonical_lp0(p: u32) -> Dfao {
    let r = p as usize;
    let mut delta = vec![vec![1u32; r]; 3];
    delta[0][0] = 2;
    delta[2] = vec![2; r];
    Dfao { p, alphabet: digit_alphabet(p, false), states: 3, delta, q0: 0, outputs: vec![1, 1, 0] }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parity() -> Dfao {
        Dfao::new(2, digit_alphabet(2, false), vec![vec![0, 1], vec![1, 0]], 0, vec![0, 1]).unwrap()
    }

    #[test]
    fn run_examples() {
        let m = parity();
        assert_eq!(m.run(&[]).unwrap(), 0);
        assert_eq!(m.run(&[1, 0, 1]).unwrap(), 0);
        assert!(m.run(&[2]).is_err());
        assert!(!canonical_lp0(2).accepts(&[0, 1]));
    }

    #[test]
    fn minimize_examples() {
        let m = parity();
        assert_eq!(m.minimize().states, 2);
        let mut u = m.clone();
        u.delta.push(vec![0, 0]);
        u.outputs.push(1);
        u.states = 3;
        assert_eq!(u.minimize().states, 2);
        let x = m.product(&m, |a, b| a ^ b).unwrap().minimize();
        assert_eq!(x.states, 1);
        assert_eq!(x.outputs, vec![0]);
    }

    #[test]
    fn reverse_small_language() {
        // L = {10}
        let m = Dfao::new(2, digit_alphabet(2, false), vec![vec![3, 1], vec![2, 3], vec![3, 3], vec![3, 3]], 0, vec![0, 0, 1, 0]).unwrap();
        let r = m.reverse_language().unwrap();
        assert!(r.accepts(&[0, 1]));
        assert!(!r.accepts(&[1, 0]));
        assert_eq!(r.accepted_words(4), vec![vec![0, 1]]);
    }

    #[test]
    fn lp0_reverse_has_no_trailing_zero() {
        let r = canonical_lp0(3).reverse_language().unwrap();
        for w in r.accepted_words(4) {
            assert_ne!(w.last(), Some(&0));
        }
        assert!(r.accepts(&[0, 0, 1]));
    }

    #[test]
    fn well_ordered_examples() {
        // .0*1
        let p = 2;
        let m = Dfao::new(p, digit_alphabet(p, true), vec![vec![3, 3, 1], vec![1, 2, 3], vec![3, 3, 3], vec![3, 3, 3]], 0, vec![0, 0, 1, 0]).unwrap();
        assert!(matches!(m.well_ordered_check().unwrap(), WellOrdered::NotWellOrdered { .. }));
        // 10*.
        let m = Dfao::new(p, digit_alphabet(p, true), vec![vec![3, 1, 3], vec![1, 3, 2], vec![3, 3, 3], vec![3, 3, 3]], 0, vec![0, 0, 1, 0]).unwrap();
        assert_eq!(m.well_ordered_check().unwrap(), WellOrdered::Certified);
        // Not inside L_p: accepts "01."
        let m = Dfao::new(p, digit_alphabet(p, true), vec![vec![1, 3, 3], vec![3, 2, 3], vec![3, 3, 4], vec![3, 3, 3], vec![3, 3, 3]], 0, vec![0, 0, 0, 0, 1]).unwrap();
        assert!(m.well_ordered_check().is_err());
    }
}
