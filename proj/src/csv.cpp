#include "csv.hpp"

#include "nemsizer/errors.hpp"

#include <charconv>
#include <istream>

namespace nemsizer::detail
{
    namespace
    {
        std::string_view
        trim(std::string_view s)
        {
            auto const first = s.find_first_not_of(" \t\r");
            if (first == std::string_view::npos)
            {
                return {};
            }
            auto const last = s.find_last_not_of(" \t\r");
            return s.substr(first, last - first + 1);
        }

        bool
        skip(std::string_view line)
        {
            auto const t = trim(line);
            return t.empty() || t.front() == '#';
        }
    }

    std::vector<std::string>
    split_csv_line(std::string_view line)
    {
        std::vector<std::string> out;
        std::size_t start = 0;
        while (true)
        {
            auto const comma = line.find(',', start);
            auto const piece = line.substr(start, comma == std::string_view::npos ? line.npos
                                                                                  : comma - start);
            out.emplace_back(trim(piece));
            if (comma == std::string_view::npos)
            {
                break;
            }
            start = comma + 1;
        }
        return out;
    }

    CsvReader::CsvReader(std::istream& in, std::string source)
        : in_{in}
        , source_{std::move(source)}
    {
        std::string line;
        while (std::getline(in_, line))
        {
            ++line_;
            if (skip(line))
            {
                continue;
            }
            auto const header = split_csv_line(line);
            for (std::size_t i = 0; i < header.size(); ++i)
            {
                index_[header[i]] = i;
            }
            return;
        }
        fail("missing header row");
    }

    void
    CsvReader::require(std::vector<std::string_view> const& columns) const
    {
        for (auto c : columns)
        {
            if (!has(c))
            {
                fail("missing column '" + std::string{c} + "'");
            }
        }
    }

    bool
    CsvReader::has(std::string_view column) const
    {
        return index_.contains(std::string{column});
    }

    bool
    CsvReader::next()
    {
        std::string line;
        while (std::getline(in_, line))
        {
            ++line_;
            if (skip(line))
            {
                continue;
            }
            fields_ = split_csv_line(line);
            if (fields_.size() != index_.size())
            {
                fail("expected " + std::to_string(index_.size()) + " fields, found "
                     + std::to_string(fields_.size()));
            }
            return true;
        }
        return false;
    }

    std::string const&
    CsvReader::text(std::string_view column) const
    {
        auto const it = index_.find(std::string{column});
        if (it == index_.end())
        {
            fail("missing column '" + std::string{column} + "'");
        }
        return fields_[it->second];
    }

    double
    CsvReader::number(std::string_view column) const
    {
        auto const& s = text(column);
        double v = 0.0;
        auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size())
        {
            fail("column '" + std::string{column} + "': '" + s + "' is not a number");
        }
        return v;
    }

    int
    CsvReader::integer(std::string_view column) const
    {
        auto const& s = text(column);
        int v = 0;
        auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size())
        {
            fail("column '" + std::string{column} + "': '" + s + "' is not an integer");
        }
        return v;
    }

    void
    CsvReader::fail(std::string const& message) const
    {
        throw ValidationError(source_ + ":" + std::to_string(line_) + ": " + message);
    }
}
