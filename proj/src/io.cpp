#include <seqmatch/io.hpp>

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

using json = nlohmann::ordered_json;
using std::string;

namespace seqmatch
{
    namespace
    {
        auto parse_json(const string & text) -> json
        {
            try {
                return json::parse(text);
            }
            catch (const json::exception & e) {
                throw DomainError(string("invalid JSON: ") + e.what());
            }
        }

        auto string_list(const json & j, const string & what) -> std::vector<string>
        {
            if (! j.is_array())
                throw DomainError(what + " must be an array of strings");
            std::vector<string> out;
            for (auto & v : j) {
                if (! v.is_string())
                    throw DomainError(what + " must be an array of strings");
                out.push_back(v.get<string>());
            }
            return out;
        }
    }

    auto parse_instance(const string & text) -> MatchingInstance
    {
        json j = parse_json(text);
        for (auto & key : { "firms", "workers", "firm_prefs", "worker_prefs" })
            if (! j.contains(key))
                throw DomainError(string("instance file missing key '") + key + "'");

        RawInstance raw;
        raw.firms = string_list(j["firms"], "firms");
        raw.workers = string_list(j["workers"], "workers");

        auto read_prefs = [&] (const json & prefs, const std::vector<string> & owners,
                const string & what) {
            if (! prefs.is_object())
                throw DomainError(what + " must be an object");
            std::vector<std::vector<string>> out;
            for (auto & name : owners)
                out.push_back(prefs.contains(name)
                        ? string_list(prefs[name], what + "[" + name + "]")
                        : std::vector<string>{});
            for (auto & [key, value] : prefs.items())
                if (std::find(owners.begin(), owners.end(), key) == owners.end())
                    throw DomainError(what + " lists unknown agent '" + key + "'");
            return out;
        };
        raw.firm_prefs = read_prefs(j["firm_prefs"], raw.firms, "firm_prefs");
        raw.worker_prefs = read_prefs(j["worker_prefs"], raw.workers, "worker_prefs");
        return MatchingInstance::validate(raw);
    }

    auto serialize_instance(const MatchingInstance & inst) -> string
    {
        auto raw = inst.to_raw();
        json j;
        j["firms"] = raw.firms;
        j["workers"] = raw.workers;
        json fp = json::object(), wp = json::object();
        for (std::size_t i = 0; i < raw.firms.size(); ++i)
            fp[raw.firms[i]] = raw.firm_prefs[i];
        for (std::size_t i = 0; i < raw.workers.size(); ++i)
            wp[raw.workers[i]] = raw.worker_prefs[i];
        j["firm_prefs"] = fp;
        j["worker_prefs"] = wp;
        return j.dump(2) + "\n";
    }

    auto parse_order(const MatchingInstance & inst, const string & text) -> ParsedOrder
    {
        json j = parse_json(text);
        ParsedOrder out;
        if (j.contains("pairs")) {
            if (! j["pairs"].is_array())
                throw DomainError("'pairs' must be an array of [firm, worker] pairs");
            for (auto & e : j["pairs"]) {
                if (! e.is_array() || e.size() != 2 || ! e[0].is_string() || ! e[1].is_string())
                    throw DomainError("'pairs' must be an array of [firm, worker] pairs");
                auto p = inst.firm_index(e[0].get<string>());
                auto q = inst.worker_index(e[1].get<string>());
                if (! p)
                    throw DomainError("unknown firm '" + e[0].get<string>() + "' in order file");
                if (! q)
                    throw DomainError("unknown worker '" + e[1].get<string>() + "' in order file");
                out.sigma.sequence.push_back(Pair{ *p, *q });
            }
        }
        else if (j.contains("position_order")) {
            PositionOrder pi;
            for (auto & name : string_list(j["position_order"], "position_order")) {
                auto p = inst.firm_index(name);
                if (! p)
                    throw DomainError("unknown firm '" + name + "' in order file");
                pi.firms.push_back(*p);
            }
            out.sigma = induced_order(inst, pi);
            out.pi = std::move(pi);
        }
        else
            throw DomainError("order file needs either 'pairs' or 'position_order'");
        check_order(inst, out.sigma);
        return out;
    }

    auto serialize_order(const MatchingInstance & inst, const OfferingOrder & sigma) -> string
    {
        json pairs = json::array();
        for (auto e : sigma.sequence)
            pairs.push_back({ inst.firm_name(e.firm), inst.worker_name(e.worker) });
        json j;
        j["pairs"] = pairs;
        return j.dump(2) + "\n";
    }

    auto serialize_position_order(const MatchingInstance & inst, const PositionOrder & pi)
            -> string
    {
        json names = json::array();
        for (int p : pi.firms)
            names.push_back(inst.firm_name(p));
        json j;
        j["position_order"] = names;
        return j.dump(2) + "\n";
    }

    auto serialize_matching(const MatchingInstance & inst, const Matching & mu) -> string
    {
        json pairs = json::array();
        for (int p = 0; p < mu.firm_count(); ++p)
            if (mu.worker_of(p) >= 0)
                pairs.push_back({ inst.firm_name(p), inst.worker_name(mu.worker_of(p)) });
        json j;
        j["pairs"] = pairs;
        return j.dump(2) + "\n";
    }

    auto parse_matching(const MatchingInstance & inst, const string & text) -> Matching
    {
        json j = parse_json(text);
        if (! j.contains("pairs") || ! j["pairs"].is_array())
            throw DomainError("matching file needs a 'pairs' array");
        Matching mu(inst.firm_count(), inst.worker_count());
        for (auto & e : j["pairs"]) {
            if (! e.is_array() || e.size() != 2 || ! e[0].is_string() || ! e[1].is_string())
                throw DomainError("'pairs' must be an array of [firm, worker] pairs");
            auto p = inst.firm_index(e[0].get<string>());
            auto q = inst.worker_index(e[1].get<string>());
            if (! p)
                throw DomainError("unknown firm '" + e[0].get<string>() + "' in matching file");
            if (! q)
                throw DomainError("unknown worker '" + e[1].get<string>() + "' in matching file");
            if (mu.worker_of(*p) >= 0 || mu.firm_of(*q) >= 0)
                throw DomainError("matching file assigns an agent twice");
            mu.match(*p, *q);
        }
        check_matching(inst, mu);
        return mu;
    }

    auto format_matching_text(const MatchingInstance & inst, const Matching & mu) -> string
    {
        std::ostringstream out;
        out << '{';
        bool first = true;
        for (int p = 0; p < mu.firm_count(); ++p)
            if (mu.worker_of(p) >= 0) {
                if (! first)
                    out << ',';
                first = false;
                out << '(' << inst.firm_name(p) << ',' << inst.worker_name(mu.worker_of(p)) << ')';
            }
        out << '}';
        return out.str();
    }

    auto format_named_matching_text(const NamedMatching & mu) -> string
    {
        std::ostringstream out;
        out << '{';
        bool first = true;
        for (auto & [f, w] : mu) {
            if (! first)
                out << ',';
            first = false;
            out << '(' << f << ',' << w << ')';
        }
        out << '}';
        return out.str();
    }

    auto read_file(const string & path) -> string
    {
        std::ifstream in(path, std::ios::binary);
        if (! in)
            throw DomainError("cannot read " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }

    void write_file(const string & path, const string & text)
    {
        std::ofstream out(path, std::ios::binary);
        if (! out || ! (out << text))
            throw DomainError("cannot write " + path);
    }
}
