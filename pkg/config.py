# 全局配置常量
import os

# 规则学习相关配置
DEFAULT_RATIO = 0.5          # 例外比例：|E-| <= |E+| * ratio 时开始学习例外
MAX_EXCEPTION_DEPTH = 10     # 例外嵌套的最大层数
TARGET_PREDICATE = 'better'  # 排序比较器的目标谓词
AB_PREFIX = 'ab'             # 例外（abnormal）谓词前缀
DEFAULT_TAIL = 0.05          # 最小覆盖比例：文字至少覆盖 ceil(tail * |E+|) 个正例

# 数据划分相关配置
TRAIN_FRACTION = 0.8  # 80% 训练，20% 测试
DEFAULT_SEED = 1
DEFAULT_RUNS = 5

# 样本对采样相关配置
MAX_PAIRS_CAP = 5000         # 默认最多采样的样本对数量
SIGMA_RANK_DIVISOR = 4       # sigma 默认值 = max(MIN_SIGMA, n / SIGMA_RANK_DIVISOR)
MIN_SIGMA = 1.0
SAMPLER_ATTEMPT_FACTOR = 20  # 采样尝试次数上限 = max_pairs * 该系数

# 程序文本输出相关配置
THRESHOLD_DECIMALS = 3

# 并发相关配置（1 表示在当前线程内执行）
MAX_WORKERS = int(os.environ.get('FOLDTR_MAX_WORKERS', '1'))

# 日志相关配置
LOG_LEVEL = os.environ.get('FOLDTR_LOG_LEVEL', 'INFO')
LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

# 模型文件格式版本
MODEL_FORMAT_VERSION = 1
