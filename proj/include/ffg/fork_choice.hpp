#pragma once

#include "ffg/chain.hpp"
#include "ffg/finality.hpp"

namespace ffg {

// Casper-extended fork choice over the leaves of `view`:
//   1. never a head whose chain drops a known finalized checkpoint,
//   2. highest justified epoch, counting only justifications made while the
//      total deposit was at least params.min_fork_choice_deposit,
//   3. greatest height (PoW proxy),
//   4. earliest arrival.
// With nothing justified beyond genesis this is longest chain, first seen.
BlockId fork_choice(const ChainView& view, const FinalityState& finality, const ProtocolParams& params);

} // namespace ffg
