# 위상 복원(phase retrieval) 국소 지형 탐침 툴킷
