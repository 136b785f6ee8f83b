use super::Player;
use std::fmt::Write as _;

/// Nodes whose value does not depend on the strategies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fixed {
    /// Unexplored: worth 0, hence lost by whoever is solving.
    Boundary,
    /// Sink won by the given player.
    WonBy(Player),
}

/// Explicit parity game with coloured edges. `None` is the neutral colour.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Game {
    pub owner: Vec<Player>,
    pub edges: Vec<Vec<(usize, Option<u32>)>>,
    pub fixed: Vec<Option<Fixed>>,
    /// Number of colours; every colour is below this.
    pub colours: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct GameParseError {
    pub line: usize,
    pub msg: String,
}

impl Game {
    pub fn new(colours: usize) -> Game {
        Game { colours, ..Default::default() }
    }

    pub fn add_node(&mut self, owner: Player) -> usize {
        self.owner.push(owner);
        self.edges.push(Vec::new());
        self.fixed.push(None);
        self.owner.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, to: usize, colour: Option<u32>) {
        if let Some(c) = colour {
            assert!((c as usize) < self.colours, "colour {c} out of range");
        }
        self.edges[from].push((to, colour));
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    /// Text listing: a `colours N` header, then one line per node:
    /// `id owner fixed succ:colour ...` with owner `C`/`E`, fixed one of
    /// `-` (none), `B` (boundary), `WC`/`WE` (won by a player), and colour
    /// `inf` for the neutral colour.
    pub fn to_text(&self) -> String {
        let mut out = format!("colours {}\n", self.colours);
        for v in 0..self.len() {
            let owner = match self.owner[v] {
                Player::Controller => "C",
                Player::Environment => "E",
            };
            let fixed = match self.fixed[v] {
                None => "-",
                Some(Fixed::Boundary) => "B",
                Some(Fixed::WonBy(Player::Controller)) => "WC",
                Some(Fixed::WonBy(Player::Environment)) => "WE",
            };
            let _ = write!(out, "{v} {owner} {fixed}");
            for (w, c) in &self.edges[v] {
                match c {
                    Some(c) => {
                        let _ = write!(out, " {w}:{c}");
                    }
                    None => {
                        let _ = write!(out, " {w}:inf");
                    }
                }
            }
            out.push('\n');
        }
        out
    }

    /// Parse the format written by [`Game::to_text`]. Lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Game, GameParseError> {
        let err = |line: usize, msg: &str| GameParseError { line, msg: msg.to_string() };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
        let colours: usize = header
            .strip_prefix("colours ")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| err(hl, "expected `colours N`"))?;
        let mut game = Game::new(colours);
        let mut pending = Vec::new();
        for (ln, l) in lines {
            let mut it = l.split_whitespace();
            let id: usize = it.next().and_then(|s| s.parse().ok()).ok_or_else(|| err(ln, "bad node id"))?;
            if id != game.len() {
                return Err(err(ln, "node ids must be consecutive from 0"));
            }
            let owner = match it.next() {
                Some("C") => Player::Controller,
                Some("E") => Player::Environment,
                _ => return Err(err(ln, "owner must be C or E")),
            };
            let fixed = match it.next() {
                Some("-") => None,
                Some("B") => Some(Fixed::Boundary),
                Some("WC") => Some(Fixed::WonBy(Player::Controller)),
                Some("WE") => Some(Fixed::WonBy(Player::Environment)),
                _ => return Err(err(ln, "fixed must be -, B, WC or WE")),
            };
            let v = game.add_node(owner);
            game.fixed[v] = fixed;
            for e in it {
                let (w, c) = e.split_once(':').ok_or_else(|| err(ln, "edge must be succ:colour"))?;
                let w: usize = w.parse().map_err(|_| err(ln, "bad successor"))?;
                let c = if c == "inf" {
                    None
                } else {
                    let c: u32 = c.parse().map_err(|_| err(ln, "bad colour"))?;
                    if c as usize >= colours {
                        return Err(err(ln, "colour out of range"));
                    }
                    Some(c)
                };
                pending.push((ln, v, w, c));
            }
        }
        for (ln, v, w, c) in pending {
            if w >= game.len() {
                return Err(err(ln, "successor out of range"));
            }
            game.edges[v].push((w, c));
        }
        Ok(game)
    }
}
