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

#ifndef OAMLINK_KEYVALUE_H
#define OAMLINK_KEYVALUE_H

#include <map>
#include <set>
#include <string>
#include <vector>

namespace oam
{
    // Flat "key = value" text; '#' starts a comment, blank lines ignored, keys unique.
    // Lists are comma separated; numeric ranges may be written start:step:stop.
    // Mode sets are separated by ';' (e.g. "1; 2; -1,1").
    class KeyValueSpec
    {
    public:
        static KeyValueSpec parse(const std::string &text, const std::string &source = "<spec>");
        static KeyValueSpec load(const std::string &path);

        bool has(const std::string &key) const;
        int line(const std::string &key) const;
        const std::string &source() const { return source_; }

        std::string str(const std::string &key) const;
        std::string str(const std::string &key, const std::string &fallback) const;
        double num(const std::string &key) const;
        double num(const std::string &key, double fallback) const;
        long integer(const std::string &key) const;
        long integer(const std::string &key, long fallback) const;
        bool flag(const std::string &key, bool fallback) const;
        std::vector<double> list(const std::string &key) const;
        std::vector<long> int_list(const std::string &key) const;
        std::vector<std::vector<long>> groups(const std::string &key) const;

        // Keys present in the text but never read
        std::vector<std::string> unused() const;

        // config_error carrying "source:line: field 'key': msg"
        [[noreturn]] void fail(const std::string &key, const std::string &msg) const;

    private:
        struct Entry
        {
            std::string value;
            int line = 0;
        };
        const Entry &entry(const std::string &key) const;

        std::string source_;
        std::map<std::string, Entry> entries_;
        mutable std::set<std::string> used_;
    };
}

#endif
