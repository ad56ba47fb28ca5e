#pragma once

#include <cstdint>
#include <random>

#include "braidloom/braid.hpp"
#include "braidloom/moves.hpp"

namespace braidloom {

// Deterministic generators backing the self-test corpora.

// A random legal braided movie: starts from a random small word and applies
// legal events drawn uniformly from the applicable ones.
BraidedMovie random_braided_movie(std::uint64_t seed, int max_events, int max_index);

// A random diagram built from a seed closure by random legal moves
// (R1/R2/R3 insertions and slides), capped at `max_crossings`.
AxisDiagram random_diagram(std::uint64_t seed, int max_crossings);

// Applies up to `count` random non-critical moves (R1+/-, R2+/-, R3) to a
// diagram, returning the events that applied.
std::vector<InputEvent> random_isotopy_events(std::mt19937_64& rng, AxisDiagram& d, int count,
                                              int max_crossings);

}  // namespace braidloom
