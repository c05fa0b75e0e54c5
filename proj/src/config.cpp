#include "nemsizer/config.hpp"

#include "nemsizer/errors.hpp"

#include <toml.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace nemsizer
{
    namespace
    {
        class Reader
        {
          public:
            explicit Reader(std::string source)
                : source_{std::move(source)}
            {
            }

            [[noreturn]] void
            fail(toml::node const* node, std::string const& message) const
            {
                int line = 0;
                if (node != nullptr)
                {
                    line = static_cast<int>(node->source().begin.line);
                }
                throw ValidationError(source_ + ":" + std::to_string(line) + ": " + message);
            }

            void
            only_keys(toml::table const& table, std::set<std::string> const& allowed,
                      std::string const& where) const
            {
                for (auto const& [key, node] : table)
                {
                    if (!allowed.contains(std::string{key.str()}))
                    {
                        fail(&node, "unknown key '" + std::string{key.str()} + "' in " + where);
                    }
                }
            }

            double
            number(toml::table const& table, std::string const& key, toml::node const* context) const
            {
                auto const* node = table.get(key);
                if (node == nullptr)
                {
                    fail(context, "missing '" + key + "'");
                }
                return as_number(*node, key);
            }

            std::optional<double>
            optional_number(toml::table const& table, std::string const& key) const
            {
                auto const* node = table.get(key);
                if (node == nullptr)
                {
                    return std::nullopt;
                }
                return as_number(*node, key);
            }

            double
            as_number(toml::node const& node, std::string const& key) const
            {
                if (auto v = node.value<double>())
                {
                    return *v;
                }
                fail(&node, "'" + key + "' must be a number");
            }

            std::optional<std::string>
            optional_string(toml::table const& table, std::string const& key) const
            {
                auto const* node = table.get(key);
                if (node == nullptr)
                {
                    return std::nullopt;
                }
                if (auto const* s = node->as_string())
                {
                    return s->get();
                }
                fail(node, "'" + key + "' must be a string");
            }

            std::vector<int>
            int_array(toml::node const& node, std::string const& key) const
            {
                auto const* arr = node.as_array();
                if (arr == nullptr)
                {
                    fail(&node, "'" + key + "' must be an array of integers");
                }
                std::vector<int> out;
                for (auto const& item : *arr)
                {
                    auto v = item.value<std::int64_t>();
                    if (!v || !item.is_integer())
                    {
                        fail(&item, "'" + key + "' must contain integers");
                    }
                    out.push_back(static_cast<int>(*v));
                }
                return out;
            }

          private:
            std::string source_;
        };

        AssignmentRule
        parse_rule(Reader const& r, toml::table const& t, std::size_t index)
        {
            std::string const where = "tariff.rule #" + std::to_string(index + 1);
            r.only_keys(t, {"months", "hours", "peak", "import_price", "export_price", "label"},
                        where);
            AssignmentRule rule;
            rule.source_line = static_cast<int>(t.source().begin.line);
            if (auto const* months = t.get("months"))
            {
                rule.months = r.int_array(*months, "months");
                for (int m : rule.months)
                {
                    if (m < 1 || m > 12)
                    {
                        r.fail(months, where + ": month " + std::to_string(m) + " outside 1..12");
                    }
                }
            }
            else
            {
                for (int m = 1; m <= 12; ++m)
                {
                    rule.months.push_back(m);
                }
            }
            if (auto const* hours = t.get("hours"))
            {
                auto const h = r.int_array(*hours, "hours");
                if (h.size() != 2)
                {
                    r.fail(hours, where + ": 'hours' must be [start, end)");
                }
                if (h[0] < 0 || h[0] > 23 || h[1] < 1 || h[1] > 24 || h[0] >= h[1])
                {
                    r.fail(hours, where + ": hour range must satisfy 0 <= start < end <= 24 "
                                          "(split ranges that cross midnight)");
                }
                rule.hour_begin = h[0];
                rule.hour_end = h[1];
            }
            if (auto const* peak = t.get("peak"))
            {
                auto v = peak->value<bool>();
                if (!v)
                {
                    r.fail(peak, where + ": 'peak' must be true or false");
                }
                rule.peak = *v;
            }
            rule.price.import_price = r.number(t, "import_price", &t);
            rule.price.export_price = r.number(t, "export_price", &t);
            rule.label = r.optional_string(t, "label").value_or("");
            return rule;
        }

        TariffSchedule
        parse_tariff(Reader const& r, toml::table const& root)
        {
            auto const* node = root.get("tariff");
            if (node == nullptr || !node->is_table())
            {
                r.fail(node, "missing [tariff] table");
            }
            auto const& t = *node->as_table();
            r.only_keys(t, {"name", "fixed_charge", "granularity", "rule"}, "[tariff]");

            TariffSchedule s;
            s.name = r.optional_string(t, "name").value_or("tariff");
            s.fixed_charge = r.optional_number(t, "fixed_charge").value_or(0.0);
            if (auto g = r.optional_string(t, "granularity"))
            {
                if (*g == "month-peak")
                {
                    s.granularity = Granularity::MonthPeak;
                }
                else if (*g == "rule")
                {
                    s.granularity = Granularity::Rule;
                }
                else
                {
                    r.fail(t.get("granularity"), "granularity must be 'month-peak' or 'rule'");
                }
            }

            auto const* rules = t.get("rule");
            if (rules == nullptr)
            {
                r.fail(node, "[tariff] has no [[tariff.rule]] entries");
            }
            auto const* arr = rules->as_array();
            if (arr == nullptr || !arr->is_array_of_tables())
            {
                r.fail(rules, "'rule' must be an array of tables ([[tariff.rule]])");
            }
            for (std::size_t i = 0; i < arr->size(); ++i)
            {
                s.rules.push_back(parse_rule(r, *arr->get(i)->as_table(), i));
            }
            return s;
        }

        std::string
        resolve(std::string const& base, std::string const& path)
        {
            std::filesystem::path p{path};
            if (p.is_absolute() || base.empty())
            {
                return p.string();
            }
            return (std::filesystem::path{base}.parent_path() / p).lexically_normal().string();
        }

        void
        parse_scenario(Reader const& r, toml::table const& root, Config& c)
        {
            auto const* node = root.get("scenario");
            if (node == nullptr)
            {
                return;
            }
            auto const* t = node->as_table();
            if (t == nullptr)
            {
                r.fail(node, "[scenario] must be a table");
            }
            r.only_keys(*t,
                        {"hourly", "aggregates", "sigma_by_month", "elasticity", "anchor_price",
                         "c_g", "capex", "annual_rate", "loan_months", "credit_fraction", "g_max"},
                        "[scenario]");
            c.has_scenario = true;
            auto const hourly = r.optional_string(*t, "hourly");
            auto const aggregates = r.optional_string(*t, "aggregates");
            if (hourly.has_value() == aggregates.has_value())
            {
                r.fail(node, "[scenario] needs exactly one of 'hourly' or 'aggregates'");
            }
            if (hourly)
            {
                c.hourly_path = resolve(c.source, *hourly);
            }
            if (aggregates)
            {
                c.aggregates_path = resolve(c.source, *aggregates);
            }

            if (auto const* sig = t->get("sigma_by_month"))
            {
                auto const* arr = sig->as_array();
                if (arr == nullptr || arr->size() != 12)
                {
                    r.fail(sig, "'sigma_by_month' must be an array of 12 numbers");
                }
                std::array<double, 12> s{};
                for (std::size_t m = 0; m < 12; ++m)
                {
                    s[m] = r.as_number(*arr->get(m), "sigma_by_month");
                    if (!(s[m] > 0.0))
                    {
                        r.fail(arr->get(m), "'sigma_by_month' entries must be positive");
                    }
                }
                c.sigma_by_month = s;
            }
            else if (hourly)
            {
                r.fail(node, "'sigma_by_month' is required with hourly data");
            }

            if (auto v = r.optional_number(*t, "elasticity"))
            {
                c.build.elasticity = *v;
            }
            if (auto v = r.optional_number(*t, "anchor_price"))
            {
                c.build.anchor_price = *v;
            }
            if (auto v = r.optional_number(*t, "g_max"))
            {
                c.build.g_max = *v;
            }

            bool const has_cost_parts = t->contains("capex") || t->contains("annual_rate")
                                     || t->contains("loan_months") || t->contains("credit_fraction");
            if (auto v = r.optional_number(*t, "c_g"))
            {
                if (has_cost_parts)
                {
                    r.fail(t->get("c_g"), "give either 'c_g' or the loan terms, not both");
                }
                c.build.c_g = *v;
            }
            else
            {
                double const capex = r.optional_number(*t, "capex").value_or(3750.0);
                double const rate = r.optional_number(*t, "annual_rate").value_or(0.055);
                double const months = r.optional_number(*t, "loan_months").value_or(120.0);
                double const credit = r.optional_number(*t, "credit_fraction").value_or(0.7);
                if (months != std::floor(months) || months <= 0.0)
                {
                    r.fail(t->get("loan_months"), "'loan_months' must be a positive integer");
                }
                try
                {
                    c.build.c_g = amortized_cost(capex, rate, static_cast<int>(months), credit);
                }
                catch (ValidationError const& e)
                {
                    r.fail(node, e.what());
                }
            }
        }
    }

    Config
    parse_config(std::string const& text, std::string const& source)
    {
        Reader const r{source};
        toml::table root;
        try
        {
            root = toml::parse(text, source);
        }
        catch (toml::parse_error const& e)
        {
            throw ValidationError(
                source + ":" + std::to_string(e.source().begin.line) + ": "
                + std::string{e.description()});
        }
        r.only_keys(root, {"tariff", "scenario"}, "configuration");

        Config c;
        c.source = source;
        c.tariff = parse_tariff(r, root);
        parse_scenario(r, root, c);
        return c;
    }

    Config
    read_config(std::string const& path)
    {
        std::ifstream in{path};
        if (!in)
        {
            throw ValidationError("cannot open config '" + path + "'");
        }
        std::ostringstream text;
        text << in.rdbuf();
        return parse_config(text.str(), path);
    }

    std::vector<PeriodAggregate>
    load_aggregates(Config const& config, ValidatedSchedule const& schedule)
    {
        if (!config.has_scenario)
        {
            throw ValidationError(config.source + ": no [scenario] table");
        }
        if (config.aggregates_path)
        {
            return read_aggregates_csv(*config.aggregates_path);
        }
        auto const records = read_hourly_csv(*config.hourly_path);
        auto aggregates = aggregate(records, schedule);
        apply_sigma_by_month(aggregates, records, schedule, *config.sigma_by_month);
        return aggregates;
    }

    Scenario
    build_from_config(Config const& config)
    {
        auto const schedule = validate_schedule(config.tariff);
        return build_scenario(load_aggregates(config, schedule), schedule, config.build);
    }

    Scenario
    load_config(std::string const& path)
    {
        return build_from_config(read_config(path));
    }
}
