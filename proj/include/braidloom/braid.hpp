#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "braidloom/errors.hpp"
#include "braidloom/report.hpp"

namespace braidloom {

// === Braid words ===

struct Letter {
    int generator = 1;  // 1 <= generator <= index-1
    int sign = 1;       // +1 or -1

    bool operator==(const Letter&) const = default;
};

// A word in the braid group B_n together with its strand count n.
// Values are immutable by convention: operations return new words.
struct BraidWord {
    int index = 0;  // number of strands, n >= 0
    std::vector<Letter> letters;

    bool operator==(const BraidWord&) const = default;
};

// Throws InvariantViolation if a letter is out of range or the index is negative.
void check_word(const BraidWord& w);

// Underlying permutation of {0..n-1}: perm[start strand] = end strand.
std::vector<int> permutation_of(const BraidWord& w);

// Number of cycles of permutation_of == components of the braid closure.
int closure_components(const BraidWord& w);

int exponent_sum(const BraidWord& w);

// === Braided movie events (the three classes of braided-legal modifications
// plus closed-braid isotopy moves) ===

struct CyclicShift { int k = 0; };
struct Relation3 { int pos = 0; };
struct Commute { int pos = 0; };
struct CancelInsert { int pos = 0; int generator = 1; int sign = 1; };
struct CancelDelete { int pos = 0; };
struct Birth {};
struct Death {};
struct Band { int pos = 0; int generator = 1; int sign = 1; };

using BraidedMovieEvent =
    std::variant<CyclicShift, Relation3, Commute, CancelInsert, CancelDelete, Birth, Death, Band>;

const char* event_kind_name(const BraidedMovieEvent& e);
bool is_critical_event(const BraidedMovieEvent& e);  // Birth, Death or Band

// Applies one event, validating its site. Throws on illegal events.
BraidWord apply_event(const BraidWord& w, const BraidedMovieEvent& e);

struct BraidedMovie {
    std::string name = "movie";
    BraidWord initial;
    std::vector<BraidedMovieEvent> events;
};

// still(k) = initial word after the first k events; still(0) = initial.
// Throws if any event is illegal.
std::vector<BraidWord> movie_stills(const BraidedMovie& m);

ValidationReport validate_movie(const BraidedMovie& m);

// Morse count: +1 per Birth, +1 per Death, -1 per Band.
// Throws InvalidMovie if the movie does not validate.
int euler_characteristic(const BraidedMovie& m);

// === Markov moves ===

struct Conjugate { BraidWord by; };
struct StabilizePositive {};
struct StabilizeNegative {};
struct Destabilize {};

using MarkovMove = std::variant<Conjugate, StabilizePositive, StabilizeNegative, Destabilize>;

BraidWord apply_markov(const BraidWord& w, const MarkovMove& mv);

// === Small helpers ===

BraidWord inverse_word(const BraidWord& w);

// Free reduction: removes adjacent (and cyclically adjacent) canceling pairs,
// using far-commutation to surface hidden cancellations. Preserves the braid
// index and the closure link type exactly.
BraidWord free_reduce(const BraidWord& w);

// Handle reduction: rewrites sigma_i^e v sigma_i^-e handles through the braid
// relations until none remain (bounded), then free-reduces. Preserves the
// group element, hence index and closure.
BraidWord handle_reduce(const BraidWord& w);

// Shortest handle-reduced representative over cyclic rotations; preserves the
// closure link type and the index.
BraidWord cyclic_reduce(const BraidWord& w);

// Markov-shrunk representative: cyclic reduction interleaved with free
// destabilizations. Preserves the closure link type but not the index; meant
// for invariant computations on rendered closures.
BraidWord markov_shrink(const BraidWord& w);
BraidWord concat(const BraidWord& a, const BraidWord& b);  // same index required
std::string word_to_string(const BraidWord& w);

}  // namespace braidloom
