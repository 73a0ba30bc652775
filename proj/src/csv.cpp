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

#include "oamlink/csv.hpp"
#include "oamlink/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace oam
{
    std::string csv_quote(const std::string &field)
    {
        if (field.find_first_of(",\"\r\n") == std::string::npos)
            return field;
        std::string out = "\"";
        for (char c : field)
        {
            if (c == '"')
                out += '"';
            out += c;
        }
        out += '"';
        return out;
    }

    std::string csv_number(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    }

    CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void CsvTable::add_row(std::vector<std::string> cells)
    {
        if (cells.size() != header_.size())
            throw argument_error("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                                 std::to_string(header_.size()));
        rows_.push_back(std::move(cells));
    }

    std::string CsvTable::str() const
    {
        std::string out;
        auto line = [&](const std::vector<std::string> &cells)
        {
            for (size_t i = 0; i < cells.size(); ++i)
            {
                if (i)
                    out += ',';
                out += csv_quote(cells[i]);
            }
            out += "\r\n";
        };
        line(header_);
        for (const auto &r : rows_)
            line(r);
        return out;
    }

    void CsvTable::write(const std::string &path) const
    {
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw config_error("cannot open " + path + " for writing");
        f << str();
    }

    std::vector<std::vector<std::string>> csv_parse(const std::string &text)
    {
        std::vector<std::vector<std::string>> rows;
        std::vector<std::string> row;
        std::string cell;
        bool quoted = false, any = false;
        for (size_t i = 0; i < text.size(); ++i)
        {
            char c = text[i];
            if (quoted)
            {
                if (c == '"')
                {
                    if (i + 1 < text.size() && text[i + 1] == '"')
                        cell += '"', ++i;
                    else
                        quoted = false;
                }
                else
                    cell += c;
                continue;
            }
            if (c == '"')
                quoted = true, any = true;
            else if (c == ',')
                row.push_back(cell), cell.clear(), any = true;
            else if (c == '\r')
                continue;
            else if (c == '\n')
            {
                row.push_back(cell);
                rows.push_back(row);
                row.clear(), cell.clear(), any = false;
            }
            else
                cell += c, any = true;
        }
        if (any || !row.empty())
        {
            row.push_back(cell);
            rows.push_back(row);
        }
        return rows;
    }
}
