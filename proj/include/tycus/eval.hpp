#pragma once

#include "tycus/lambda.hpp"

namespace tycus {

enum class StuckKind { HeadNil, TailNil, Other };

/// One small-step reduction attempt.
struct StepOutcome {
    enum Kind { Stepped, IsValue, Stuck } kind;
    TermPtr next;                        // when Stepped
    StuckKind stuck = StuckKind::Other;  // when Stuck
};

/// Performs exactly one call-by-value reduction, or reports that the term is a
/// value / stuck. `head nil` and `tail nil` are flagged distinctly.
StepOutcome step(const TermPtr& t, const RdfGraph& g);

struct EvalResult {
    enum Status { Value, Stuck, OutOfFuel } status;
    TermPtr term;  // the value, the stuck term, or the last term reached
    StuckKind stuck = StuckKind::Other;
    long steps = 0;
};

/// Iterates step up to `fuel` times and classifies the outcome.
EvalResult evaluate(const TermPtr& t, const RdfGraph& g, long fuel = 1000000);

}  // namespace tycus
