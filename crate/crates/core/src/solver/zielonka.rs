use super::{Game, Player};

/// Node-coloured game obtained by splitting every edge through a fresh node
/// carrying the edge colour. Original nodes get a colour above all others
/// whose parity favours the main player, so it only decides plays that see
/// no colour at all.
struct Split {
    owner: Vec<bool>, // true: main player
    colour: Vec<u32>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

fn split(game: &Game, player: Player, p: u32) -> Split {
    let n = game.len();
    let mut neutral = game.colours as u32;
    if neutral % 2 != p % 2 {
        neutral += 1;
    }
    let mut owner: Vec<bool> = game.owner.iter().map(|&o| o == player).collect();
    let mut colour = vec![neutral; n];
    let mut succ = vec![Vec::new(); n];
    for v in 0..n {
        for &(w, c) in &game.edges[v] {
            let m = owner.len();
            owner.push(true);
            colour.push(c.unwrap_or(neutral));
            succ.push(vec![w]);
            succ[v].push(m);
        }
    }
    let mut pred = vec![Vec::new(); owner.len()];
    for (v, ws) in succ.iter().enumerate() {
        for &w in ws {
            pred[w].push(v);
        }
    }
    Split { owner, colour, succ, pred }
}

impl Split {
    /// Attractor of `target` for the main player (`main`) or the opponent, within `alive`.
    fn attractor(&self, alive: &[bool], target: &[bool], main: bool) -> Vec<bool> {
        let n = self.owner.len();
        let mut attr = target.to_vec();
        let mut count: Vec<usize> =
            (0..n).map(|v| if alive[v] { self.succ[v].iter().filter(|&&w| alive[w]).count() } else { 0 }).collect();
        let mut queue: Vec<usize> = (0..n).filter(|&v| attr[v]).collect();
        while let Some(w) = queue.pop() {
            for &v in &self.pred[w] {
                if !alive[v] || attr[v] {
                    continue;
                }
                if self.owner[v] == main {
                    attr[v] = true;
                    queue.push(v);
                } else {
                    count[v] -= 1;
                    if count[v] == 0 {
                        attr[v] = true;
                        queue.push(v);
                    }
                }
            }
        }
        attr
    }

    /// Returns the region won by the main player among `alive` nodes.
    fn solve(&self, alive: &[bool], p: u32) -> Vec<bool> {
        let n = self.owner.len();
        let Some(c) = (0..n).filter(|&v| alive[v]).map(|v| self.colour[v]).min() else {
            return vec![false; n];
        };
        // `main` is the player favoured by colour c.
        let main = c % 2 == p % 2;
        let top: Vec<bool> = (0..n).map(|v| alive[v] && self.colour[v] == c).collect();
        let a = self.attractor(alive, &top, main);
        let rest: Vec<bool> = (0..n).map(|v| alive[v] && !a[v]).collect();
        let w_main_sub = self.solve(&rest, p);
        // Region won in the subgame by the player not favoured by c.
        let lost: Vec<bool> = (0..n).map(|v| rest[v] && (w_main_sub[v] != main)).collect();
        if !lost.iter().any(|&x| x) {
            return (0..n).map(|v| alive[v] && main).collect();
        }
        let b = self.attractor(alive, &lost, !main);
        let rest2: Vec<bool> = (0..n).map(|v| alive[v] && !b[v]).collect();
        let w2 = self.solve(&rest2, p);
        (0..n).map(|v| alive[v] && if b[v] { !main } else { w2[v] }).collect()
    }
}

/// Winning region of `player` (winning with parity `p`) computed with the
/// classical recursive algorithm. The game must be total (every node has a
/// successor); fixed-node annotations are ignored.
pub fn solve_zielonka(game: &Game, player: Player, p: u32) -> Vec<bool> {
    assert!(game.edges.iter().all(|e| !e.is_empty()), "game must be total");
    let s = split(game, player, p);
    let alive = vec![true; s.owner.len()];
    let won = s.solve(&alive, p);
    won[..game.len()].to_vec()
}
