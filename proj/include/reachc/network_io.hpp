/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include "reachc/network.hpp"

#include "json.hpp"

#include <filesystem>

namespace reachc {

/*
 * Network file format (JSON):
 *
 *   {
 *     "name": "...", "notes": "...",          (optional)
 *     "input_dim": 3,
 *     "inputs": ["x1", "x2", "x3"],           (optional, default x1..xm)
 *     "layers": [                              non-input layers, in order
 *       [ {"id": "v1",                         (optional, default n<l>_<j>)
 *          "activation": "relu" | "sigmoid" | "tanh" | "nlrelu" | "identity" | null,
 *          "bias": "p/q",
 *          "incoming": [ {"src": "x1", "w": "1"}, ... ]}, ... ],
 *       ...
 *     ]
 *   }
 *
 * Rationals are "p/q" or decimal strings; JSON integers are accepted, JSON
 * floats only when their shortest decimal text is exactly the double.
 */
nlohmann::json network_to_json(const Network &net);
Network network_from_json(const nlohmann::json &j);

Network read_network(const std::filesystem::path &path);
void write_network(const Network &net, const std::filesystem::path &path);

/// Box file: {"box": [["lo", "hi"], ...]}.
nlohmann::json box_to_json(const InputBox &box);
InputBox box_from_json(const nlohmann::json &j);
InputBox read_box(const std::filesystem::path &path);

/// Rational from a JSON string or exactly-representable number.
Rational rational_from_json(const nlohmann::json &j, const std::string &where);

nlohmann::json read_json_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, const std::string &text);
std::string read_text_file(const std::filesystem::path &path);

} // namespace reachc
