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

#include "oamlink/keyvalue.hpp"
#include "oamlink/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace oam
{
    static std::string trim(const std::string &s)
    {
        const auto a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos)
            return "";
        const auto b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
    }

    static std::vector<std::string> split(const std::string &s, char sep)
    {
        std::vector<std::string> out;
        std::string cur;
        std::istringstream in(s);
        while (std::getline(in, cur, sep))
            out.push_back(trim(cur));
        if (!s.empty() && s.back() == sep)
            out.push_back("");
        return out;
    }

    static bool to_double(const std::string &s, double &v)
    {
        const char *b = s.data(), *e = s.data() + s.size();
        auto r = std::from_chars(b, e, v);
        return r.ec == std::errc() && r.ptr == e && std::isfinite(v);
    }

    KeyValueSpec KeyValueSpec::parse(const std::string &text, const std::string &source)
    {
        KeyValueSpec kv;
        kv.source_ = source;
        std::istringstream in(text);
        std::string raw;
        int ln = 0;
        while (std::getline(in, raw))
        {
            ++ln;
            std::string s = raw;
            const auto hash = s.find('#');
            if (hash != std::string::npos)
                s.resize(hash);
            s = trim(s);
            if (s.empty())
                continue;
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw config_error(source + ":" + std::to_string(ln) + ": expected 'key = value'");
            const std::string key = trim(s.substr(0, eq)), val = trim(s.substr(eq + 1));
            if (key.empty())
                throw config_error(source + ":" + std::to_string(ln) + ": empty key");
            if (kv.entries_.count(key))
                throw config_error(source + ":" + std::to_string(ln) + ": field '" + key + "' repeated (first on line " +
                                   std::to_string(kv.entries_[key].line) + ")");
            kv.entries_[key] = Entry{val, ln};
        }
        return kv;
    }

    KeyValueSpec KeyValueSpec::load(const std::string &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw config_error("cannot read spec file " + path);
        std::ostringstream ss;
        ss << f.rdbuf();
        return parse(ss.str(), path);
    }

    bool KeyValueSpec::has(const std::string &key) const
    {
        return entries_.count(key) != 0;
    }

    int KeyValueSpec::line(const std::string &key) const
    {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    void KeyValueSpec::fail(const std::string &key, const std::string &msg) const
    {
        const int ln = line(key);
        throw config_error(source_ + (ln ? ":" + std::to_string(ln) : std::string()) + ": field '" + key + "': " + msg);
    }

    const KeyValueSpec::Entry &KeyValueSpec::entry(const std::string &key) const
    {
        auto it = entries_.find(key);
        if (it == entries_.end())
            fail(key, "missing");
        used_.insert(key);
        return it->second;
    }

    std::string KeyValueSpec::str(const std::string &key) const
    {
        return entry(key).value;
    }

    std::string KeyValueSpec::str(const std::string &key, const std::string &fallback) const
    {
        return has(key) ? str(key) : fallback;
    }

    double KeyValueSpec::num(const std::string &key) const
    {
        double v;
        if (!to_double(entry(key).value, v))
            fail(key, "not a number: '" + entry(key).value + "'");
        return v;
    }

    double KeyValueSpec::num(const std::string &key, double fallback) const
    {
        return has(key) ? num(key) : fallback;
    }

    long KeyValueSpec::integer(const std::string &key) const
    {
        const double v = num(key);
        if (v != std::floor(v) || std::abs(v) > 9.0e15)
            fail(key, "not an integer: '" + entry(key).value + "'");
        return (long)v;
    }

    long KeyValueSpec::integer(const std::string &key, long fallback) const
    {
        return has(key) ? integer(key) : fallback;
    }

    bool KeyValueSpec::flag(const std::string &key, bool fallback) const
    {
        if (!has(key))
            return fallback;
        const std::string v = str(key);
        if (v == "true" || v == "yes" || v == "1" || v == "on")
            return true;
        if (v == "false" || v == "no" || v == "0" || v == "off")
            return false;
        fail(key, "expected true/false, got '" + v + "'");
    }

    static std::vector<double> parse_list(const KeyValueSpec &kv, const std::string &key, const std::string &text)
    {
        std::vector<double> out;
        for (const auto &item : split(text, ','))
        {
            if (item.empty())
                kv.fail(key, "empty list item");
            const auto parts = split(item, ':');
            if (parts.size() == 1)
            {
                double v;
                if (!to_double(item, v))
                    kv.fail(key, "not a number: '" + item + "'");
                out.push_back(v);
            }
            else if (parts.size() == 3)
            {
                double a, s, b;
                if (!to_double(parts[0], a) || !to_double(parts[1], s) || !to_double(parts[2], b) || !(s > 0.0) || b < a)
                    kv.fail(key, "bad range '" + item + "' (start:step:stop with step > 0)");
                const long n = (long)std::floor((b - a) / s + 1e-9);
                if (n > 100000)
                    kv.fail(key, "range too long");
                for (long i = 0; i <= n; ++i)
                    out.push_back(a + s * double(i));
            }
            else
                kv.fail(key, "bad list item '" + item + "'");
        }
        return out;
    }

    std::vector<double> KeyValueSpec::list(const std::string &key) const
    {
        return parse_list(*this, key, str(key));
    }

    std::vector<long> KeyValueSpec::int_list(const std::string &key) const
    {
        std::vector<long> out;
        for (double v : list(key))
        {
            if (v != std::floor(v))
                fail(key, "list items must be integers");
            out.push_back((long)v);
        }
        return out;
    }

    std::vector<std::vector<long>> KeyValueSpec::groups(const std::string &key) const
    {
        std::vector<std::vector<long>> out;
        for (const auto &g : split(str(key), ';'))
        {
            std::vector<long> ints;
            for (double v : parse_list(*this, key, g))
            {
                if (v != std::floor(v))
                    fail(key, "group items must be integers");
                ints.push_back((long)v);
            }
            out.push_back(ints);
        }
        return out;
    }

    std::vector<std::string> KeyValueSpec::unused() const
    {
        std::vector<std::string> out;
        for (const auto &kv : entries_)
            if (!used_.count(kv.first))
                out.push_back(kv.first);
        return out;
    }
}
