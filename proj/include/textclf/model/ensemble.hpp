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


#ifndef TEXTCLF_MODEL_ENSEMBLE_HPP_
#define TEXTCLF_MODEL_ENSEMBLE_HPP_

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "textclf/model/classifier.hpp"

namespace textclf {

// Arithmetic mean of member distributions. Throws ContractViolation on an
// empty list or members of different lengths.
std::vector<double> ensemble_average(const std::vector<std::vector<double>>& distributions);
// Members must share the class list (same names, same order).
std::vector<double> ensemble_average(std::span<const Classifier* const> members,
                                     const std::vector<std::string>& tokens);

// Indices of the k highest scores, best first; ties go to the lower index.
std::vector<std::size_t> select_top_k(std::span<const double> scores, std::size_t k = 3);

class EnsembleClassifier : public Classifier {
 public:
  explicit EnsembleClassifier(std::vector<std::shared_ptr<const Classifier>> members);

  std::vector<double> predict_proba(const std::vector<std::string>& tokens) const override;
  const std::vector<std::string>& classes() const override;
  std::string name() const override;
  const std::vector<std::shared_ptr<const Classifier>>& members() const { return members_; }

 private:
  std::vector<std::shared_ptr<const Classifier>> members_;
};

}  // namespace textclf

#endif  // TEXTCLF_MODEL_ENSEMBLE_HPP_
