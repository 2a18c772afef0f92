/*
 * Copyright 2026 The textclf Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#ifndef TEXTCLF_MODEL_CLASSIFIER_HPP_
#define TEXTCLF_MODEL_CLASSIFIER_HPP_

#include <memory>
#include <string>
#include <vector>

namespace textclf {

// Anything that maps a token sequence to a distribution over a fixed,
// ordered class list.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::vector<double> predict_proba(const std::vector<std::string>& tokens) const = 0;
  virtual const std::vector<std::string>& classes() const = 0;
  virtual std::string name() const = 0;
};

}  // namespace textclf

#endif  // TEXTCLF_MODEL_CLASSIFIER_HPP_
