//! Red-blue colourings of complete `r`-graphs and bounded searches for the
//! patterns they must contain: sets of mixed degree, complete bipartite
//! configurations, unavoidable `f`-good patterns and monochromatic cliques.
//!
//! Searches either return a witness that re-verifies against the colouring
//! or report that none was found; they never claim nonexistence.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng as _;

use crate::combin::{binom, bit, bits, colex_rank, low_mask, subsets};
use crate::distribution::Budget;
use crate::error::{invalid, precondition, Error, Result};
use crate::exec;
use crate::hypergraph::{edge_mask, parse_numbers, Hypergraph, VertexSet, MAX_VERTICES};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    Red,
    Blue,
    Uncolored,
}

impl Color {
    pub fn symbol(self) -> char {
        match self {
            Color::Red => 'R',
            Color::Blue => 'B',
            Color::Uncolored => 'U',
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A colouring of every `r`-subset of `0..n`, indexed by colex rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoColoring {
    r: usize,
    n: usize,
    colors: Vec<Color>,
}

impl TwoColoring {
    pub fn uniform(r: usize, n: usize, color: Color) -> Result<TwoColoring> {
        if r == 0 || n > MAX_VERTICES {
            return Err(invalid(format!("unsupported colouring shape r = {r}, n = {n}")));
        }
        let total = binom(n, r);
        Budget::from_env().check("colouring table", total)?;
        Ok(TwoColoring { r, n, colors: vec![color; total as usize] })
    }

    /// Edges of `g` red, every other `r`-set blue.
    pub fn from_graph(g: &Hypergraph) -> Result<TwoColoring> {
        let mut c = TwoColoring::uniform(g.r(), g.n(), Color::Blue)?;
        for &e in g.edges() {
            c.set(e, Color::Red);
        }
        Ok(c)
    }

    /// Each `r`-set red with probability `p_red`, otherwise blue.
    pub fn random(r: usize, n: usize, p_red: f64, seed: u64) -> Result<TwoColoring> {
        if !(0.0..=1.0).contains(&p_red) {
            return Err(invalid(format!("red probability {p_red} outside [0, 1]")));
        }
        let mut c = TwoColoring::uniform(r, n, Color::Blue)?;
        let mut rng = rng::stream(seed, 0);
        for color in &mut c.colors {
            if rng.random_bool(p_red) {
                *color = Color::Red;
            }
        }
        Ok(c)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn color(&self, set: u128) -> Color {
        self.colors[colex_rank(set)]
    }

    pub fn set(&mut self, set: u128, color: Color) {
        let i = colex_rank(set);
        self.colors[i] = color;
    }

    pub fn count(&self, color: Color) -> usize {
        self.colors.iter().filter(|&&c| c == color).count()
    }

    /// The red sets as a hypergraph.
    pub fn red_graph(&self) -> Hypergraph {
        let red = subsets(self.n, self.r).filter(|&s| self.color(s) == Color::Red);
        Hypergraph::new(self.r, self.n, red).expect("colouring sets are r-sets")
    }

    /// Text form: the header `r n`, then one line per red or uncoloured set
    /// with its vertices followed by `R` or `U`. Unlisted sets are blue.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.r, self.n);
        for s in subsets(self.n, self.r) {
            let c = self.color(s);
            if c != Color::Blue {
                let labels: Vec<String> = VertexSet(s).labels().iter().map(|v| v.to_string()).collect();
                out.push_str(&format!("{} {}\n", labels.join(" "), c));
            }
        }
        out
    }

    /// Parses [`TwoColoring::to_text`]; lines may also name blue sets with `B`.
    pub fn parse_text(text: &str) -> Result<TwoColoring> {
        let mut coloring: Option<TwoColoring> = None;
        let mut seen = std::collections::HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match coloring.as_mut() {
                None => {
                    let nums = parse_numbers(line, line_no)?;
                    if nums.len() != 2 {
                        return Err(Error::Parse { line: line_no, message: "header must be \"r n\"".into() });
                    }
                    coloring = Some(
                        TwoColoring::uniform(nums[0], nums[1], Color::Blue)
                            .map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?,
                    );
                }
                Some(c) => {
                    let (verts, tag) = line.rsplit_once(char::is_whitespace).unwrap_or(("", line));
                    let color = match tag {
                        "R" => Color::Red,
                        "B" => Color::Blue,
                        "U" => Color::Uncolored,
                        _ => {
                            return Err(Error::Parse {
                                line: line_no,
                                message: format!("expected a colour R, B or U, found {tag:?}"),
                            })
                        }
                    };
                    let mask = edge_mask(&parse_numbers(verts, line_no)?, c.r, c.n, line_no)?;
                    if !seen.insert(mask) {
                        return Err(Error::Parse { line: line_no, message: "set coloured twice".into() });
                    }
                    c.set(mask, color);
                }
            }
        }
        coloring.ok_or_else(|| Error::Parse { line: 1, message: "missing \"r n\" header".into() })
    }
}

/// `α_r(ε) = (ε/3)^{4^r}`.
pub fn alpha(r: usize, eps: &BigRational) -> BigRational {
    let base = eps / BigRational::from_integer(BigInt::from(3));
    num_traits::pow(base, 4usize.pow(r as u32))
}

/// The `(r−1)`-sets contained in at least `α·n` red and at least `α·n` blue
/// `r`-sets.
pub fn mixed_degree_sets(c: &TwoColoring, alpha: &BigRational) -> Result<Vec<VertexSet>> {
    let (r, n) = (c.r, c.n);
    Budget::from_env().check("mixed degree enumeration", binom(n, r) * r as u128)?;
    let lower = binom(n, r - 1) as usize;
    let mut red = vec![0u64; lower];
    let mut blue = vec![0u64; lower];
    for s in subsets(n, r) {
        let table = match c.color(s) {
            Color::Red => &mut red,
            Color::Blue => &mut blue,
            Color::Uncolored => continue,
        };
        for v in bits(s) {
            table[colex_rank(s & !bit(v))] += 1;
        }
    }
    let threshold = alpha * BigRational::from_integer(BigInt::from(n));
    let enough = |count: u64| BigRational::from_integer(BigInt::from(count)) >= threshold;
    Ok(subsets(n, r - 1)
        .filter(|&s| {
            let i = colex_rank(s);
            enough(red[i]) && enough(blue[i])
        })
        .map(VertexSet)
        .collect())
}

/// Disjoint `V_1, …, V_{r−1}, R, B` of equal size such that every transversal
/// of the `V_i` forms a red set with each vertex of `R` and a blue set with
/// each vertex of `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartitePattern {
    pub parts: Vec<VertexSet>,
    pub red: VertexSet,
    pub blue: VertexSet,
}

/// Every transversal of `parts`, as masks.
fn transversals(parts: &[u128]) -> Vec<u128> {
    parts.iter().fold(vec![0u128], |acc, &p| {
        acc.iter().flat_map(|&m| bits(p).map(move |v| m | bit(v))).collect()
    })
}

pub fn verify_bipartite_pattern(c: &TwoColoring, p: &BipartitePattern) -> bool {
    let q = p.red.len();
    let mut all: Vec<u128> = p.parts.iter().map(|s| s.mask()).collect();
    all.extend([p.red.mask(), p.blue.mask()]);
    let disjoint = all.iter().fold(Some(0u128), |acc, &s| acc.filter(|u| u & s == 0).map(|u| u | s)).is_some();
    let sized = all.iter().all(|s| s.count_ones() as usize == q) && q > 0;
    let in_range = all.iter().all(|&s| s & !low_mask(c.n) == 0);
    if !(disjoint && sized && in_range && p.parts.len() + 1 == c.r) {
        return false;
    }
    let parts: Vec<u128> = p.parts.iter().map(|s| s.mask()).collect();
    transversals(&parts).into_iter().all(|t| {
        bits(p.red.mask()).all(|v| c.color(t | bit(v)) == Color::Red)
            && bits(p.blue.mask()).all(|v| c.color(t | bit(v)) == Color::Blue)
    })
}

/// Searches for a [`BipartitePattern`] with parts of size `q`, for `r ∈ {2, 3}`.
pub fn find_bipartite_pattern(c: &TwoColoring, q: usize) -> Result<Option<BipartitePattern>> {
    let (r, n) = (c.r, c.n);
    if !(2..=3).contains(&r) || q == 0 {
        return Err(precondition(format!("bipartite patterns need r in {{2, 3}} and q >= 1, got r = {r}, q = {q}")));
    }
    let choices: Vec<u128> = subsets(n, q).collect();
    Budget::from_env().check("bipartite pattern search", (choices.len() as u128).pow(r as u32 - 1) * n as u128)?;
    // R and B are the vertices completing every transversal in one colour.
    let complete = |parts: &[u128]| -> Option<BipartitePattern> {
        let used = parts.iter().fold(0u128, |m, p| m | p);
        let ts = transversals(parts);
        let mut red = 0u128;
        let mut blue = 0u128;
        for v in bits(low_mask(n) & !used) {
            let first = c.color(ts[0] | bit(v));
            if first != Color::Uncolored && ts.iter().all(|&t| c.color(t | bit(v)) == first) {
                if first == Color::Red {
                    red |= bit(v);
                } else {
                    blue |= bit(v);
                }
            }
        }
        (red.count_ones() as usize >= q && blue.count_ones() as usize >= q).then(|| BipartitePattern {
            parts: parts.iter().map(|&p| VertexSet(p)).collect(),
            red: VertexSet(bits(red).take(q).fold(0, |m, v| m | bit(v))),
            blue: VertexSet(bits(blue).take(q).fold(0, |m, v| m | bit(v))),
        })
    };
    let found = exec::find_first_block(choices.len(), |i| {
        let v1 = choices[i];
        if r == 2 {
            return complete(&[v1]);
        }
        // The parts play symmetric roles, so V_1 holds the smaller minimum.
        choices
            .iter()
            .filter(|&&v2| v2 & v1 == 0 && v2.trailing_zeros() > v1.trailing_zeros())
            .find_map(|&v2| complete(&[v1, v2]))
    });
    Ok(found)
}

/// Disjoint `V_1, …, V_r` of equal size such that for every
/// `f: [r] → [r]` the sets `{v_1, …, v_r}` with `v_i ∈ V_{f(i)}` share one
/// colour, while the union is not monochromatic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternWitness {
    pub parts: Vec<VertexSet>,
    /// For every `f` (1-based images) whose class is nonempty, its colour.
    pub classes: Vec<(Vec<usize>, Color)>,
}

/// Colour of the class of `f`, or `None` if it is empty, mixed or touches an
/// uncoloured set. The outer `Option` distinguishes empty (`Some(None)`).
fn class_color(c: &TwoColoring, parts: &[u128], f: &[usize]) -> Option<Option<Color>> {
    let mut sets: Vec<u128> = vec![0];
    for &fi in f {
        sets = sets
            .iter()
            .flat_map(|&m| bits(parts[fi] & !m).map(move |v| m | bit(v)))
            .collect();
    }
    let mut color = None;
    for s in sets {
        let col = c.color(s);
        if col == Color::Uncolored || color.is_some_and(|x| x != col) {
            return None;
        }
        color = Some(col);
    }
    Some(color)
}

/// All functions `[r] → [r]`, as 0-based image vectors.
fn all_functions(r: usize) -> Vec<Vec<usize>> {
    (0..r.pow(r as u32))
        .map(|mut code| {
            (0..r)
                .map(|_| {
                    let d = code % r;
                    code /= r;
                    d
                })
                .collect()
        })
        .collect()
}

/// Checks the pattern conditions over every `f: [r] → [r]` and every `r`-set
/// of the union, independently of how the witness was found.
pub fn verify_pattern(c: &TwoColoring, w: &PatternWitness) -> bool {
    let r = c.r;
    let parts: Vec<u128> = w.parts.iter().map(|s| s.mask()).collect();
    let t = parts.first().map_or(0, |p| p.count_ones());
    let mut union = 0u128;
    for &p in &parts {
        if p & union != 0 || p.count_ones() != t || p & !low_mask(c.n) != 0 {
            return false;
        }
        union |= p;
    }
    if parts.len() != r || t == 0 {
        return false;
    }
    if all_functions(r).iter().any(|f| class_color(c, &parts, f).is_none()) {
        return false;
    }
    let vs: Vec<usize> = bits(union).collect();
    let colors: Vec<Color> = subsets(vs.len(), r)
        .map(|s| c.color(bits(s).fold(0u128, |m, i| m | bit(vs[i]))))
        .collect();
    colors.iter().any(|&x| x != colors[0])
}

fn witness(c: &TwoColoring, parts: &[u128]) -> PatternWitness {
    let classes = all_functions(c.r)
        .into_iter()
        .filter_map(|f| {
            let col = class_color(c, parts, &f)??;
            Some((f.iter().map(|x| x + 1).collect(), col))
        })
        .collect();
    PatternWitness { parts: parts.iter().map(|&p| VertexSet(p)).collect(), classes }
}

/// Searches for a [`PatternWitness`] with parts of size `t`, for `r = 3` and
/// `t ∈ {1, 2}`. Three singletons span one triple, so `t = 1` never succeeds.
pub fn find_unavoidable_pattern(c: &TwoColoring, t: usize) -> Result<Option<PatternWitness>> {
    if c.r != 3 || !(1..=2).contains(&t) {
        return Err(precondition(format!("unavoidable patterns are searched for r = 3 and t in {{1, 2}}, got r = {}, t = {t}", c.r)));
    }
    let choices: Vec<u128> = subsets(c.n, t).collect();
    Budget::from_env().check("unavoidable pattern search", (choices.len() as u128).pow(3))?;
    let functions = all_functions(3);
    // Functions touching only V_1 and V_2, checked before V_3 is chosen.
    let pair_functions: Vec<&Vec<usize>> = functions.iter().filter(|f| f.iter().all(|&x| x < 2)).collect();
    let found = exec::find_first_block(choices.len(), |i| {
        let v1 = choices[i];
        let low = |p: u128| p.trailing_zeros();
        for &v2 in choices.iter().filter(|&&p| p & v1 == 0 && low(p) > low(v1)) {
            if pair_functions.iter().any(|f| class_color(c, &[v1, v2, 0], f).is_none()) {
                continue;
            }
            for &v3 in choices.iter().filter(|&&p| p & (v1 | v2) == 0 && low(p) > low(v2)) {
                let parts = [v1, v2, v3];
                let w = witness(c, &parts);
                if verify_pattern(c, &w) {
                    return Some(w);
                }
            }
        }
        None
    });
    Ok(found)
}

/// A set of `size` vertices whose `r`-subsets all share one colour (red or
/// blue), by backtracking.
pub fn monochromatic_clique(c: &TwoColoring, size: usize) -> Result<Option<VertexSet>> {
    let (r, n) = (c.r, c.n);
    if size > n {
        return Ok(None);
    }
    Budget::from_env().check("monochromatic clique search", binom(n, size) * 2)?;
    if size < r {
        return Ok(Some(VertexSet(low_mask(size))));
    }
    fn grow(c: &TwoColoring, color: Color, set: u128, from: usize, left: usize) -> Option<u128> {
        if left == 0 {
            return Some(set);
        }
        let members: Vec<usize> = bits(set).collect();
        for v in from..c.n {
            if c.n - v < left {
                break;
            }
            let fits = members.len() + 1 < c.r
                || subsets(members.len(), c.r - 1)
                    .all(|s| c.color(bits(s).fold(bit(v), |m, i| m | bit(members[i]))) == color);
            if fits {
                if let Some(found) = grow(c, color, set | bit(v), v + 1, left - 1) {
                    return Some(found);
                }
            }
        }
        None
    }
    let found = exec::find_first_block(n, |first| {
        [Color::Red, Color::Blue]
            .into_iter()
            .find_map(|color| grow(c, color, bit(first), first + 1, size - 1))
    });
    Ok(found.map(VertexSet))
}

/// Independent check that every `r`-subset of `set` has the same colour.
pub fn is_monochromatic(c: &TwoColoring, set: VertexSet) -> bool {
    let vs = set.labels();
    let mut colors = subsets(vs.len(), c.r).map(|s| c.color(bits(s).fold(0u128, |m, i| m | bit(vs[i] - 1))));
    match colors.next() {
        None => true,
        Some(first) => first != Color::Uncolored && colors.all(|x| x == first),
    }
}
