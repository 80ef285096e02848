from svmelm.classifiers.common import LabelEncoding
from svmelm.classifiers.elm import (
    TrainedElm,
    draw_hidden_layer,
    elm_fit,
    elm_hidden,
    elm_output_weights,
    elm_predict,
    elm_scores,
)
from svmelm.classifiers.kelm import TrainedKelm, kelm_fit, kelm_predict, kelm_scores
from svmelm.classifiers.lssvm import (
    TrainedLssvm,
    lssvm_fit,
    lssvm_fit_grid,
    lssvm_grid_search,
    lssvm_predict,
    lssvm_scores,
    lssvm_solve,
)
from svmelm.classifiers.nn import TrainedNN, nn_fit, nn_predict
from svmelm.classifiers.svm import (
    SmoResult,
    TrainedSvmBinary,
    TrainedSvmMulticlass,
    dual_objective,
    smo_solve,
    svm_fit,
    svm_fit_binary,
    svm_predict,
)
