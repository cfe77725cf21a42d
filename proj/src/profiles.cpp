#include "profiles.hpp"

#include <utility>

namespace clinpred::detail {
namespace {

ColumnProfile gaussian(std::string name, std::string desc, double mean, double min, double max,
                       bool integer, double direction = 1.0, double std = 0.0) {
  ColumnProfile p;
  p.spec = {std::move(name), ColumnKind::numeric, ColumnRole::feature, std::move(desc)};
  p.gen = Generator::gaussian;
  p.mean = mean;
  p.min = min;
  p.max = max;
  p.integer = integer;
  p.direction = direction;
  p.std = std;
  return p;
}

ColumnProfile bernoulli(std::string name, std::string desc, double prob, double direction = 1.0) {
  ColumnProfile p;
  p.spec = {std::move(name), ColumnKind::numeric, ColumnRole::feature, std::move(desc)};
  p.gen = Generator::bernoulli;
  p.p = prob;
  p.direction = direction;
  return p;
}

ColumnProfile levels(std::string name, std::string desc, std::vector<double> values,
                     std::vector<double> weights, double direction = 1.0) {
  ColumnProfile p;
  p.spec = {std::move(name), ColumnKind::numeric, ColumnRole::feature, std::move(desc)};
  p.gen = Generator::levels;
  p.values = std::move(values);
  p.weights = std::move(weights);
  p.direction = direction;
  return p;
}

ColumnProfile categorical(std::string name, std::string desc, std::vector<std::string> tokens,
                          std::vector<double> weights, double direction = 1.0) {
  ColumnProfile p;
  p.spec = {std::move(name), ColumnKind::categorical, ColumnRole::feature, std::move(desc)};
  p.gen = Generator::categorical;
  p.tokens = std::move(tokens);
  p.weights = std::move(weights);
  p.direction = direction;
  return p;
}

ColumnProfile flag(std::string name, std::string desc, double p_true, double direction = 1.0) {
  return categorical(std::move(name), std::move(desc), {"f", "t"}, {1.0 - p_true, p_true}, direction);
}

ColumnProfile identifier(std::string name, std::string desc) {
  ColumnProfile p;
  p.spec = {std::move(name), ColumnKind::numeric, ColumnRole::identifier, std::move(desc)};
  p.gen = Generator::identifier;
  return p;
}

ColumnProfile target(std::string name, ColumnKind kind, std::string desc) {
  ColumnProfile p;
  p.spec = {std::move(name), kind, ColumnRole::target, std::move(desc)};
  p.gen = Generator::target;
  return p;
}

ColumnProfile excluded(ColumnProfile p) {
  p.spec.role = ColumnRole::excluded;
  return p;
}

std::vector<ColumnProfile> heart() {
  return {
      gaussian("age", "age of the patient, years", 52.20, 20, 80, true),
      bernoulli("sex", "sex, 1 = male, 0 = female", 0.70, -1.0),
      levels("cp", "chest pain type, 0-3", {0, 1, 2, 3}, {0.47, 0.17, 0.28, 0.08}),
      gaussian("trestbps", "resting blood pressure, mm Hg", 140.26, 94, 200, true, -1.0),
      gaussian("chol", "serum cholesterol, mg/dl", 274.15, 0, 602, true, -1.0),
      excluded(bernoulli("fbs", "fasting blood sugar > 120 mg/dl", 0.15)),
      excluded(levels("restecg", "resting electrocardiographic result, 0-2", {0, 1, 2},
                      {0.48, 0.50, 0.02})),
      gaussian("thalach", "maximum heart rate achieved, bpm", 147.62, 71, 202, true),
      excluded(bernoulli("exang", "exercise induced angina", 0.34, -1.0)),
      gaussian("oldpeak", "ST depression induced by exercise relative to rest", 1.07, 0, 6.2, false,
               -1.0),
      levels("slope", "slope of the peak exercise ST segment, 0-2", {0, 1, 2}, {0.07, 0.46, 0.47}),
      levels("ca", "number of major vessels colored by fluoroscopy, 0-4", {0, 1, 2, 3, 4},
             {0.57, 0.22, 0.13, 0.07, 0.01}, -1.0),
      categorical("thal", "thalassemia level code", {"0", "1", "2", "3"}, {0.01, 0.06, 0.53, 0.40},
                  -1.0),
      target("target", ColumnKind::numeric, "heart disease present (1) or absent (0)"),
  };
}

std::vector<ColumnProfile> thyroid() {
  return {
      // The reference age summary (max 65,526) is contaminated by data-entry
      // anomalies, so generation uses a plausible adult range instead.
      gaussian("age", "patient age, years", 52.0, 1, 97, true),
      categorical("sex", "sex, M or F", {"F", "M"}, {0.67, 0.33}),
      flag("on_thyroxine", "on thyroxine", 0.13),
      flag("on_antithyroid_meds", "on antithyroid medication", 0.012),
      flag("sick", "reported sickness", 0.04),
      flag("pregnant", "pregnant", 0.012),
      flag("thyroid_surgery", "previous thyroid surgery", 0.015),
      flag("I131_treatment", "previous I131 treatment", 0.018),
      flag("query_hypothyroid", "patient suspects hypothyroidism", 0.07),
      flag("query_hyperthyroid", "patient suspects hyperthyroidism", 0.07),
      flag("lithium", "on lithium", 0.01),
      flag("goitre", "goitre", 0.009),
      flag("tumor", "tumor", 0.027),
      flag("hypopituitary", "hypopituitary", 0.005),
      flag("psych", "psychiatric condition", 0.05),
      flag("TSH_measured", "TSH was measured", 0.9),
      gaussian("TSH", "thyroid-stimulating hormone, mU/l", 5.21, 0.005, 530.0, false, 1.0, 5.0),
      flag("T3_measured", "T3 was measured", 0.7),
      gaussian("T3", "triiodothyronine, nmol/l", 1.97, 0.05, 18.0, false, -1.0, 1.0),
      flag("TT4_measured", "TT4 was measured", 0.95),
      gaussian("TT4", "total thyroxine, nmol/l", 108.7, 2.0, 600.0, false, -1.0),
      flag("T4U_measured", "T4U was measured", 0.9),
      gaussian("T4U", "thyroxine uptake", 0.98, 0.17, 2.33, false, -1.0, 0.2),
      flag("FTI_measured", "FTI was measured", 0.9),
      gaussian("FTI", "free thyroxine index", 113.64, 1.4, 881.0, false, -1.0, 40.0),
      flag("TBG_measured", "TBG was measured", 0.04),
      gaussian("TBG", "thyroxine-binding globulin, nmol/l", 29.87, 0.1, 200.0, false),
      categorical("referral_source", "referral source",
                  {"other", "SVI", "SVHC", "STMW", "SVHD", "WEST"},
                  {0.59, 0.22, 0.10, 0.06, 0.02, 0.01}),
      target("target", ColumnKind::categorical, "diagnosis code (binarized before training)"),
      identifier("patient_id", "unique patient identifier"),
  };
}

std::vector<ColumnProfile> diabetes() {
  return {
      gaussian("age", "patient age, years", 41.9, 0.08, 80.0, false),
      categorical("gender", "patient gender", {"Female", "Male", "Other"}, {0.585, 0.414, 0.001}, -1.0),
      gaussian("blood_glucose_level", "blood glucose level, mg/dl", 138.0, 80.0, 300.0, true, 1.0,
               40.0),
      bernoulli("hypertension", "presence of hypertension", 0.075),
      bernoulli("heart_disease", "indicator of cardiovascular disease", 0.04),
      gaussian("bmi", "body mass index, kg/m2", 27.3, 10.0, 95.7, false, 1.0, 6.6),
      categorical("smoking_history", "smoking history",
                  {"No Info", "never", "former", "current", "not current", "ever"},
                  {0.36, 0.35, 0.09, 0.09, 0.07, 0.04}),
      target("diabetes", ColumnKind::numeric, "diabetic (1) or not (0)"),
  };
}

// Column names are reconstructed from the attribute groups of the source
// dataset's description; they are not verbatim field names.
std::vector<ColumnProfile> ckd() {
  return {
      identifier("patient_id", "unique patient identifier"),
      gaussian("age", "age, years", 54.0, 20, 90, true),
      categorical("gender", "sex", {"female", "male"}, {0.5, 0.5}),
      categorical("ethnicity", "ethnicity group", {"caucasian", "african_american", "asian", "other"},
                  {0.6, 0.2, 0.1, 0.1}),
      categorical("socioeconomic_status", "socioeconomic status", {"low", "middle", "high"},
                  {0.3, 0.5, 0.2}, -1.0),
      categorical("education_level", "educational attainment",
                  {"none", "high_school", "bachelor", "higher"}, {0.2, 0.4, 0.3, 0.1}, -1.0),
      gaussian("bmi", "body mass index (IMC), kg/m2", 27.0, 15.0, 40.0, false),
      bernoulli("smoking", "current smoker", 0.3),
      gaussian("alcohol_consumption", "alcohol units per week", 10.0, 0.0, 20.0, false),
      gaussian("physical_activity", "hours of physical activity per week", 5.0, 0.0, 10.0, false, -1.0),
      gaussian("diet_quality", "diet quality score, 0-10", 5.0, 0.0, 10.0, false, -1.0),
      gaussian("sleep_quality", "sleep quality score, 4-10", 7.0, 4.0, 10.0, false, -1.0),
      bernoulli("family_history_kidney_disease", "family history of kidney disease", 0.13),
      bernoulli("family_history_hypertension", "family history of high blood pressure", 0.3),
      bernoulli("family_history_diabetes", "family history of diabetes", 0.25),
      gaussian("systolic_bp", "systolic arterial pressure, mm Hg", 135.0, 90, 180, true),
      gaussian("diastolic_bp", "diastolic arterial pressure, mm Hg", 90.0, 60, 120, true),
      gaussian("fasting_blood_sugar", "fasting blood sugar, mg/dl", 135.0, 70.0, 200.0, false),
      gaussian("hba1c", "hemoglobin A1c, %", 7.0, 4.0, 10.0, false),
      gaussian("serum_creatinine", "serum creatinine, mg/dl", 2.7, 0.5, 5.0, false),
      gaussian("gfr", "glomerular filtration rate, ml/min/1.73m2", 65.0, 15.0, 120.0, false, -1.0),
      gaussian("protein_in_urine", "urine protein, g/day", 2.5, 0.0, 5.0, false),
      gaussian("serum_sodium", "serum sodium, mEq/l", 140.0, 135.0, 145.0, false),
      gaussian("serum_potassium", "serum potassium, mEq/l", 4.5, 3.5, 5.5, false),
      gaussian("serum_calcium", "serum calcium, mg/dl", 9.5, 8.5, 10.5, false, -1.0),
      gaussian("serum_phosphorus", "serum phosphorus, mg/dl", 3.5, 2.5, 4.5, false),
      gaussian("cholesterol_total", "total cholesterol, mg/dl", 225.0, 150.0, 300.0, false),
      bernoulli("ace_inhibitors", "uses ACE inhibitors", 0.3),
      bernoulli("diuretics", "uses diuretics", 0.3),
      bernoulli("statins", "uses statins", 0.4),
      bernoulli("nsaids", "uses anti-inflammatory drugs", 0.3),
      bernoulli("antidiabetic_medications", "uses antidiabetic medication", 0.3),
      bernoulli("edema", "edema", 0.3),
      gaussian("fatigue_levels", "exhaustion score, 0-10", 5.0, 0.0, 10.0, false),
      gaussian("nausea_vomiting", "nausea episodes per week", 3.5, 0.0, 7.0, false),
      gaussian("muscle_cramps", "muscle cramp episodes per week", 3.5, 0.0, 7.0, false),
      gaussian("itching", "itching score, 0-10", 5.0, 0.0, 10.0, false),
      gaussian("quality_of_life_score", "quality of life score, 0-100", 50.0, 0.0, 100.0, false, -1.0),
      bernoulli("heavy_metals_exposure", "exposure to heavy metals", 0.05),
      bernoulli("occupational_exposure_chemicals", "exposure to chemical products", 0.1),
      bernoulli("water_quality", "poor access to drinking water", 0.2),
      gaussian("medical_checkups_frequency", "medical visits per year", 2.0, 0.0, 4.0, false, -1.0),
      gaussian("medication_adherence", "treatment adherence score, 0-10", 5.0, 0.0, 10.0, false, -1.0),
      gaussian("health_literacy", "health literacy score, 0-10", 5.0, 0.0, 10.0, false, -1.0),
      target("diagnosis", ColumnKind::numeric, "chronic kidney disease diagnosed (1) or not (0)"),
  };
}

}  // namespace

const std::vector<ColumnProfile>& disease_profile(DiseaseId id) {
  static const std::vector<ColumnProfile> kHeart = heart();
  static const std::vector<ColumnProfile> kThyroid = thyroid();
  static const std::vector<ColumnProfile> kDiabetes = diabetes();
  static const std::vector<ColumnProfile> kCkd = ckd();
  switch (id) {
    case DiseaseId::heart:
      return kHeart;
    case DiseaseId::thyroid:
      return kThyroid;
    case DiseaseId::diabetes:
      return kDiabetes;
    case DiseaseId::ckd:
      return kCkd;
  }
  return kHeart;
}

}  // namespace clinpred::detail
