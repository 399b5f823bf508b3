/* A catalog of small benchmark games with machine-checkable expected results:
 * SPE matchings under given orders, blocking sets, the vNM-stable set,
 * essential stability, and SPE-set enumerations. */

#ifndef SEQMATCH_FIXTURES_HPP
#define SEQMATCH_FIXTURES_HPP

#include <seqmatch/core.hpp>

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace seqmatch
{
    struct FixtureResult
    {
        std::string name;
        int checks = 0;
        std::vector<std::string> failures;
    };

    struct Fixture
    {
        std::string name;
        MatchingInstance instance;
        std::map<std::string, OfferingOrder> orders;
        std::map<std::string, NamedMatching> expected_spe;   // keyed by order name
        std::function<void (const Fixture &, FixtureResult &)> extra;
    };

    const std::vector<Fixture> & fixture_catalog();

    void expect(FixtureResult &, bool condition, const std::string & description);

    FixtureResult run_fixture(const Fixture &);
    std::vector<FixtureResult> run_all_fixtures();
}

#endif
