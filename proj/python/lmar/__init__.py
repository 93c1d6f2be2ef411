"""Location-mixture autoregressive forecasting."""

from ._lmar import (
    DerivedParams,
    FittedModel,
    Forecast,
    GaussianMixture,
    LmarError,
    MixtureParam,
    PcaBasis,
    PredictionInterval,
    RidgeModel,
    SynthConfig,
    TimeSeries,
    approx_obs_loglik,
    candidate_lags,
    conditional_mixture,
    derive_params,
    exact_cond_loglik,
    fit,
    log_score,
    make_forecast,
    mixture_cdf,
    mixture_quantile,
    pca_fit,
    pca_project,
    pca_reconstruct,
    point_forecast,
    prediction_interval,
    predictive_distribution,
    ridge_fit,
    ridge_predict,
    rolling_evaluate,
    simulate,
    split_train_test,
    synth_trace,
)

__all__ = [
    "DerivedParams",
    "FittedModel",
    "Forecast",
    "GaussianMixture",
    "LmarError",
    "MixtureParam",
    "PcaBasis",
    "PredictionInterval",
    "RidgeModel",
    "SynthConfig",
    "TimeSeries",
    "approx_obs_loglik",
    "candidate_lags",
    "conditional_mixture",
    "derive_params",
    "exact_cond_loglik",
    "fit",
    "log_score",
    "make_forecast",
    "mixture_cdf",
    "mixture_quantile",
    "pca_fit",
    "pca_project",
    "pca_reconstruct",
    "point_forecast",
    "prediction_interval",
    "predictive_distribution",
    "ridge_fit",
    "ridge_predict",
    "rolling_evaluate",
    "simulate",
    "split_train_test",
    "synth_trace",
]
