//! Call-for-proposal negotiation electing the shared global leader.
//!
//! Every agent proposes the most isolated member of its local archive. Each
//! agent then votes on every other proposal, rejecting it only when one of
//! its own archive members dominates it. A proposal accepted by everybody
//! wins; among several unanimous proposals, and in the fallback when none is
//! unanimous, the most isolated non-dominated proposal is elected.

use std::fmt::Write as _;

use crate::pareto::{crowding_distance, dominates, most_isolated, non_dominated_indices, Solution};

use super::SubPopulation;

#[derive(Debug, Clone, PartialEq)]
pub struct Offer {
    pub agent_id: usize,
    pub solution: Solution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vote {
    Accept,
    Reject,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NegotiationOutcome {
    pub accepted: Solution,
    /// Agent whose offer was elected.
    pub winner: usize,
    /// Whether the elected offer was accepted by every agent.
    pub unanimous: bool,
    /// `votes[voter][offer]`, in offer order.
    pub votes: Vec<Vec<Vote>>,
}

/// The agent's proposal: its most isolated local-archive member, ties broken
/// towards the lexicographically smallest objectives. An agent with an empty
/// archive proposes its most isolated non-dominated particle position.
pub fn make_offer(agent: &SubPopulation) -> Offer {
    let members = agent.local_archive.members();
    let solution = if members.is_empty() {
        let positions: Vec<Solution> = agent.particles.iter().map(|p| p.position()).collect();
        let front: Vec<Solution> = non_dominated_indices(&positions)
            .into_iter()
            .map(|i| positions[i].clone())
            .collect();
        let crowding = crowding_distance(&front);
        let best = most_isolated(&front, &crowding).expect("sub-population is non-empty");
        front[best].clone()
    } else {
        let crowding = agent.local_archive.crowding();
        let best = most_isolated(members, &crowding).expect("archive is non-empty");
        members[best].clone()
    };
    Offer {
        agent_id: agent.agent_id,
        solution,
    }
}

/// Rejects an offer only when the agent's local archive holds a member
/// dominating it.
pub fn evaluate_offer(agent: &SubPopulation, offer: &Offer) -> Vote {
    let beaten = agent
        .local_archive
        .members()
        .iter()
        .any(|m| dominates(&m.f, &offer.solution.f));
    if beaten {
        Vote::Reject
    } else {
        Vote::Accept
    }
}

/// Runs one negotiation round. `offers[i]` must come from `agents[i]`.
pub fn negotiate(offers: &[Offer], agents: &[SubPopulation]) -> NegotiationOutcome {
    assert!(!offers.is_empty(), "negotiation needs at least one offer");
    assert_eq!(offers.len(), agents.len(), "one offer per agent");

    let votes: Vec<Vec<Vote>> = agents
        .iter()
        .map(|voter| {
            offers
                .iter()
                .map(|offer| {
                    if offer.agent_id == voter.agent_id {
                        Vote::Accept
                    } else {
                        evaluate_offer(voter, offer)
                    }
                })
                .collect()
        })
        .collect();

    let solutions: Vec<&Solution> = offers.iter().map(|o| &o.solution).collect();
    let crowding = crowding_distance(&solutions);
    let non_dominated = non_dominated_indices(&solutions);
    let unanimous: Vec<usize> = non_dominated
        .iter()
        .copied()
        .filter(|&i| votes.iter().all(|row| row[i] == Vote::Accept))
        .collect();

    let pool = if unanimous.is_empty() { &non_dominated } else { &unanimous };
    let pool_solutions: Vec<&Solution> = pool.iter().map(|&i| solutions[i]).collect();
    let pool_crowding: Vec<f64> = pool.iter().map(|&i| crowding[i]).collect();
    let pick = pool[most_isolated(&pool_solutions, &pool_crowding).expect("pool is non-empty")];

    NegotiationOutcome {
        accepted: offers[pick].solution.clone(),
        winner: offers[pick].agent_id,
        unanimous: !unanimous.is_empty(),
        votes,
    }
}

/// One line of the negotiation trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    pub agent: usize,
    pub offer: Vec<f64>,
    /// One vote per agent in agent order.
    pub votes: Vec<Vote>,
    pub accepted: bool,
}

impl TraceRecord {
    pub fn from_round(iteration: usize, offers: &[Offer], outcome: &NegotiationOutcome) -> Vec<Self> {
        offers
            .iter()
            .enumerate()
            .map(|(i, offer)| TraceRecord {
                iteration,
                agent: offer.agent_id,
                offer: offer.solution.f.clone(),
                votes: outcome.votes.iter().map(|row| row[i]).collect(),
                accepted: offer.agent_id == outcome.winner,
            })
            .collect()
    }

    pub const HEADER: &'static str = "iter,agent,offer_objectives,votes,accepted";

    /// `iter,agent,offer_objectives,votes,accepted` with space-separated
    /// objectives and one `A`/`R` character per voter.
    pub fn to_line(&self) -> String {
        let mut line = String::new();
        let objectives: Vec<String> = self.offer.iter().map(|v| v.to_string()).collect();
        let votes: String = self
            .votes
            .iter()
            .map(|v| if *v == Vote::Accept { 'A' } else { 'R' })
            .collect();
        let _ = write!(
            line,
            "{},{},{},{},{}",
            self.iteration,
            self.agent,
            objectives.join(" "),
            votes,
            u8::from(self.accepted)
        );
        line
    }
}
