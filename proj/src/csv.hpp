#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace nemsizer::detail
{
    /// Minimal reader for the comma-separated files this library writes:
    /// a header row, no quoting, blank lines and '#' comments skipped.
    class CsvReader
    {
      public:
        CsvReader(std::istream& in, std::string source);

        /// Throws ValidationError naming the file unless every column is
        /// present in the header.
        void require(std::vector<std::string_view> const& columns) const;
        [[nodiscard]] bool has(std::string_view column) const;

        /// Advances to the next data row; false at end of input.
        bool next();

        [[nodiscard]] int line() const { return line_; }
        [[nodiscard]] std::string const& text(std::string_view column) const;
        [[nodiscard]] double number(std::string_view column) const;
        [[nodiscard]] int integer(std::string_view column) const;

        /// "<source>:<line>: <message>".
        [[noreturn]] void fail(std::string const& message) const;

      private:
        std::istream& in_;
        std::string source_;
        int line_ = 0;
        std::unordered_map<std::string, std::size_t> index_;
        std::vector<std::string> fields_;
    };

    std::vector<std::string> split_csv_line(std::string_view line);
}
