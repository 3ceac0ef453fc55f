#include "coljoin/selector.hpp"

#include <sstream>

namespace coljoin::selector {

Choice choose(const WorkloadFeatures& f, const SelectorConfig& cfg) {
  // low match ratio: little to materialize, the plain pipeline wins
  if (f.match_ratio < cfg.low_match_threshold)
    return {JoinAlgo::PHJ, JoinPattern::GFUR};
  // heavy skew: contiguous partitioning plus clustered gathers holds up best
  if (f.zipf_factor > cfg.skew_threshold)
    return {JoinAlgo::PHJ, JoinPattern::GFTR};
  // narrow joins have no materialization phase worth optimizing
  if (f.is_narrow) return {JoinAlgo::PHJ, JoinPattern::GFUR};
  // wide, matchy, roughly uniform
  return {JoinAlgo::PHJ, JoinPattern::GFTR};
}

Choice choose_smj_only(const WorkloadFeatures& f, const SelectorConfig& cfg) {
  if (f.payload_bytes == 8) return {JoinAlgo::SMJ, JoinPattern::GFUR};
  if (f.match_ratio < cfg.low_match_threshold)
    return {JoinAlgo::SMJ, JoinPattern::GFUR};
  return {JoinAlgo::SMJ, JoinPattern::GFTR};
}

std::string rules_text(const SelectorConfig& cfg) {
  std::ostringstream out;
  out << "all variants:\n"
      << "  match_ratio < " << cfg.low_match_threshold << "      -> PHJ-UM\n"
      << "  zipf_factor > " << cfg.skew_threshold << "         -> PHJ-OM\n"
      << "  narrow (<=1 payload/side) -> PHJ-UM\n"
      << "  otherwise                 -> PHJ-OM\n"
      << "sort-merge only:\n"
      << "  8-byte payloads           -> SMJ-UM\n"
      << "  match_ratio < " << cfg.low_match_threshold << "      -> SMJ-UM\n"
      << "  otherwise                 -> SMJ-OM\n";
  return out.str();
}

}  // namespace coljoin::selector
