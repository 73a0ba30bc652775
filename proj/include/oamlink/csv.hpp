// SPDX-License-Identifier: Apache-2.0
//
// oamlink: link-level simulator for line-of-sight multi-mode OAM radio links
// Copyright (C) 2026 The oamlink authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef OAMLINK_CSV_H
#define OAMLINK_CSV_H

#include <string>
#include <vector>

namespace oam
{
    // RFC 4180 field quoting: wrap in quotes when the field holds a comma, quote, CR or LF
    std::string csv_quote(const std::string &field);

    // Shortest round-trip decimal representation of a double ("inf", "-inf", "nan" for specials)
    std::string csv_number(double v);

    // In-memory table written in one go, CRLF line endings
    class CsvTable
    {
    public:
        explicit CsvTable(std::vector<std::string> header);

        void add_row(std::vector<std::string> cells);
        const std::vector<std::vector<std::string>> &rows() const { return rows_; }
        std::string str() const;
        void write(const std::string &path) const;

    private:
        std::vector<std::string> header_;
        std::vector<std::vector<std::string>> rows_;
    };

    // Parse RFC 4180 text into rows (used by tests and tools)
    std::vector<std::vector<std::string>> csv_parse(const std::string &text);
}

#endif
