/* File formats: JSON instances and orders, matching serialization, and small
 * filesystem helpers. Serialization is deterministic (input order). */

#ifndef SEQMATCH_IO_HPP
#define SEQMATCH_IO_HPP

#include <seqmatch/core.hpp>

#include <optional>
#include <string>

namespace seqmatch
{
    // {"firms": [...], "workers": [...], "firm_prefs": {...}, "worker_prefs": {...}}
    MatchingInstance parse_instance(const std::string & text);
    std::string serialize_instance(const MatchingInstance &);

    struct ParsedOrder
    {
        OfferingOrder sigma;
        std::optional<PositionOrder> pi;   // present for position_order files
    };

    // {"pairs": [[firm, worker], ...]} or {"position_order": [firm, ...]}
    ParsedOrder parse_order(const MatchingInstance &, const std::string & text);
    std::string serialize_order(const MatchingInstance &, const OfferingOrder &);
    std::string serialize_position_order(const MatchingInstance &, const PositionOrder &);

    // {"pairs": [[firm, worker], ...]} sorted by firm input order
    std::string serialize_matching(const MatchingInstance &, const Matching &);
    Matching parse_matching(const MatchingInstance &, const std::string & text);

    // "{(p1,q1),(p2,q3)}" sorted by firm input order
    std::string format_matching_text(const MatchingInstance &, const Matching &);
    std::string format_named_matching_text(const NamedMatching &);

    std::string read_file(const std::string & path);
    void write_file(const std::string & path, const std::string & text);
}

#endif
